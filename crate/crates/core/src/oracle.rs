//! Log-determinant engine for scalar jointly Gaussian systems.
//!
//! A system is a set of independent zero-mean Gaussian sources plus
//! observables that are linear combinations of earlier variables. Every
//! variable is stored as a row of loadings on the sources, scaled by the
//! source standard deviations, so that covariances are Gram matrices of
//! rows. Conditioning is done by Gram-Schmidt on those rows, which is the
//! square-root form of sequential Schur complements and keeps full relative
//! accuracy when the signal ratios span many orders of magnitude.
//!
//! Used only to cross-check closed-form information quantities.

use std::f64::consts::{E, PI};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Conditional variances below this fraction of the unconditional variance
/// count as zero.
pub const SINGULAR_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Default)]
pub struct GaussianSystem {
    source_std: Vec<f64>,
    names: Vec<String>,
    /// Loadings on the sources, already multiplied by their std deviations.
    rows: Vec<Vec<f64>>,
}

impl GaussianSystem {
    pub fn new() -> Self {
        Self::default()
    }

    fn index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    fn check_new(&self, name: &str) -> Result<()> {
        if self.names.iter().any(|n| n == name) {
            Err(Error::DuplicateVariable(name.to_string()))
        } else {
            Ok(())
        }
    }

    /// Declares an independent source with the given variance.
    pub fn add_source(&mut self, name: &str, variance: f64) -> Result<&mut Self> {
        self.check_new(name)?;
        if !(variance.is_finite() && variance >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "variance",
                value: variance,
            });
        }
        let k = self.source_std.len();
        self.source_std.push(variance.sqrt());
        let mut row = vec![0.0; k + 1];
        row[k] = variance.sqrt();
        self.names.push(name.to_string());
        self.rows.push(row);
        Ok(self)
    }

    /// Declares `name = Σ coeff·var` over previously declared variables.
    pub fn add_observable(&mut self, name: &str, terms: &[(&str, f64)]) -> Result<&mut Self> {
        self.check_new(name)?;
        let mut row = vec![0.0; self.source_std.len()];
        for &(var, c) in terms {
            if !c.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "coefficient",
                    value: c,
                });
            }
            let src = &self.rows[self.index(var)?];
            for (r, s) in row.iter_mut().zip(src) {
                *r += c * s;
            }
        }
        self.names.push(name.to_string());
        self.rows.push(row);
        Ok(self)
    }

    fn row(&self, name: &str) -> Result<Vec<f64>> {
        let mut r = self.rows[self.index(name)?].clone();
        r.resize(self.source_std.len(), 0.0);
        Ok(r)
    }

    /// Joint covariance of the named variables.
    pub fn covariance(&self, names: &[&str]) -> Result<DMatrix<f64>> {
        let rows: Vec<Vec<f64>> = names.iter().map(|n| self.row(n)).collect::<Result<_>>()?;
        Ok(DMatrix::from_fn(names.len(), names.len(), |i, j| dot(&rows[i], &rows[j])))
    }

    /// Orthonormal basis of the span of the `given` rows.
    fn basis(&self, given: &[&str]) -> Result<Vec<Vec<f64>>> {
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for name in given {
            let row = self.row(name)?;
            let (resid, norm2) = residual(&row, &basis);
            if norm2 > SINGULAR_REL_TOL * dot(&row, &row) && norm2 > 0.0 {
                let n = norm2.sqrt();
                basis.push(resid.iter().map(|v| v / n).collect());
            }
        }
        Ok(basis)
    }

    /// Covariance of `a` conditioned on `given`.
    pub fn conditional_covariance(&self, a: &[&str], given: &[&str]) -> Result<DMatrix<f64>> {
        let basis = self.basis(given)?;
        let rows: Vec<Vec<f64>> = a
            .iter()
            .map(|n| Ok(residual(&self.row(n)?, &basis).0))
            .collect::<Result<_>>()?;
        Ok(DMatrix::from_fn(a.len(), a.len(), |i, j| dot(&rows[i], &rows[j])))
    }

    pub fn conditional_variance(&self, target: &str, given: &[&str]) -> Result<f64> {
        Ok(self.conditional_covariance(&[target], given)?[(0, 0)])
    }

    /// `log₂ det Σ_{A|C}`; errors when the conditional covariance is singular.
    pub fn log2_det_conditional(&self, a: &[&str], given: &[&str]) -> Result<f64> {
        let mut basis = self.basis(given)?;
        let mut acc = 0.0;
        for name in a {
            let row = self.row(name)?;
            let (resid, norm2) = residual(&row, &basis);
            if norm2.is_nan() || norm2 <= SINGULAR_REL_TOL * dot(&row, &row) || norm2 == 0.0 {
                return Err(Error::SingularCovariance(format!(
                    "{} | {}",
                    a.join(","),
                    given.join(",")
                )));
            }
            acc += norm2.log2();
            let n = norm2.sqrt();
            basis.push(resid.iter().map(|v| v / n).collect());
        }
        Ok(acc)
    }

    /// Differential entropy `h(A|C)` in bits.
    pub fn entropy(&self, a: &[&str], given: &[&str]) -> Result<f64> {
        let k = a.len() as f64;
        Ok(0.5 * (k * (2.0 * PI * E).log2() + self.log2_det_conditional(a, given)?))
    }

    /// `I(A;B|C)` in bits.
    pub fn mutual_information(&self, a: &[&str], b: &[&str], given: &[&str]) -> Result<f64> {
        let ab: Vec<&str> = a.iter().chain(b).copied().collect();
        let la = self.log2_det_conditional(a, given)?;
        let lb = self.log2_det_conditional(b, given)?;
        let lab = self.log2_det_conditional(&ab, given)?;
        Ok(0.5 * (la + lb - lab))
    }
}

/// `I(A;B|C)` in bits.
pub fn mutual_information(sys: &GaussianSystem, a: &[&str], b: &[&str], given: &[&str]) -> Result<f64> {
    sys.mutual_information(a, b, given)
}

pub fn conditional_variance(sys: &GaussianSystem, target: &str, given: &[&str]) -> Result<f64> {
    sys.conditional_variance(target, given)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Component of `v` orthogonal to the orthonormal `basis`, and its squared
/// norm. Two projection passes keep it orthogonal to working precision.
fn residual(v: &[f64], basis: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let mut r = v.to_vec();
    for _ in 0..2 {
        for q in basis {
            let c = dot(&r, q);
            for (ri, qi) in r.iter_mut().zip(q) {
                *ri -= c * qi;
            }
        }
    }
    let n2 = dot(&r, &r);
    (r, n2)
}

/// Ready-made systems for the two channel variants, with unit noise and
/// unit transmit powers so that gains are square roots of the ratios.
pub mod models {
    use super::GaussianSystem;
    use crate::error::Result;
    use crate::math::ChannelParams;

    /// Sources `X1`, `U2` (private, variance `β`), `W2` (common, `1-β`),
    /// `Z1`, `Z2`; observables `X2 = U2 + W2`, `Y1`, `Y2`.
    pub fn z_channel(p: &ChannelParams, beta: f64) -> Result<GaussianSystem> {
        let mut s = GaussianSystem::new();
        let (h11, h22, h21) = (p.snr1().sqrt(), p.snr2().sqrt(), p.inr2().sqrt());
        s.add_source("X1", 1.0)?
            .add_source("U2", beta)?
            .add_source("W2", 1.0 - beta)?
            .add_source("Z1", 1.0)?
            .add_source("Z2", 1.0)?
            .add_observable("X2", &[("U2", 1.0), ("W2", 1.0)])?
            .add_observable("Y1", &[("X1", h11), ("X2", h21), ("Z1", 1.0)])?
            .add_observable("Y2", &[("X2", h22), ("Z2", 1.0)])?;
        Ok(s)
    }

    /// Interference-free receiver quantizes its signal: `Y2hat = Y2 + e`,
    /// `e ~ N(0, σ²)`.
    pub fn type1_compress_forward(p: &ChannelParams, sigma2_over_n: f64) -> Result<GaussianSystem> {
        let mut s = z_channel(p, 1.0)?;
        s.add_source("e", sigma2_over_n)?
            .add_observable("Y2hat", &[("Y2", 1.0), ("e", 1.0)])?;
        Ok(s)
    }

    /// Interfered receiver forms `Y1bar = h21·U2 + (1+α)·h21·W2 + Z1` (its
    /// own signal and part of the common message removed) and quantizes it:
    /// `Y1hat = Y1bar + e`.
    pub fn type2_relay(
        p: &ChannelParams,
        beta: f64,
        alpha: f64,
        sigma2_over_n: f64,
    ) -> Result<GaussianSystem> {
        let mut s = z_channel(p, beta)?;
        let h21 = p.inr2().sqrt();
        s.add_source("e", sigma2_over_n)?
            .add_observable(
                "Y1bar",
                &[("U2", h21), ("W2", (1.0 + alpha) * h21), ("Z1", 1.0)],
            )?
            .add_observable("Y1hat", &[("Y1bar", 1.0), ("e", 1.0)])?;
        Ok(s)
    }
}
