//! Fourier-Motzkin projection of small linear inequality systems onto two
//! variables.
//!
//! Rows are kept normalized (largest coefficient magnitude 1) so that
//! duplicate detection is scale free. Chernikov's rule discards combined
//! rows whose ancestry grows too large to be irredundant; the final 2-D
//! system is reduced to its edges by vertex enumeration.

use super::region::{HalfPlane, RateRegion};
use crate::error::{Error, Result};

const EPS: f64 = 1e-9;

/// `Σ coeffs[i]·x_i <= bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct Inequality {
    pub coeffs: Vec<f64>,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearSystem {
    variables: Vec<String>,
    rows: Vec<Inequality>,
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<f64>,
    bound: f64,
    // Indices of the original rows this one was combined from.
    history: Option<u128>,
}

/// Outcome of normalizing a row.
enum Normalized {
    Row(Row),
    /// `0 <= c` with `c >= 0`.
    Trivial,
    /// `0 <= c` with `c < 0`.
    Infeasible,
}

impl Row {
    fn normalize(mut self) -> Normalized {
        let m = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if m <= EPS * 1e-3 * self.bound.abs().max(1.0) {
            return if self.bound >= -EPS {
                Normalized::Trivial
            } else {
                Normalized::Infeasible
            };
        }
        for c in &mut self.coeffs {
            *c /= m;
            if c.abs() < 1e-15 {
                *c = 0.0;
            }
        }
        self.bound /= m;
        Normalized::Row(self)
    }

    fn same_as(&self, other: &Row) -> bool {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| (a - b).abs() <= EPS)
    }
}

struct Infeasible;

fn push(out: &mut Vec<Row>, row: Row) -> std::result::Result<(), Infeasible> {
    match row.normalize() {
        Normalized::Row(r) => out.push(r),
        Normalized::Trivial => {}
        Normalized::Infeasible => return Err(Infeasible),
    }
    Ok(())
}

impl LinearSystem {
    pub fn new<S: AsRef<str>>(variables: &[S]) -> Result<Self> {
        let mut vars: Vec<String> = Vec::with_capacity(variables.len());
        for v in variables {
            let v = v.as_ref().to_string();
            if vars.contains(&v) {
                return Err(Error::DuplicateVariable(v));
            }
            vars.push(v);
        }
        Ok(LinearSystem {
            variables: vars,
            rows: Vec::new(),
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn rows(&self) -> &[Inequality] {
        &self.rows
    }

    fn index(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    fn dense(&self, terms: &[(&str, f64)]) -> Result<Vec<f64>> {
        let mut coeffs = vec![0.0; self.variables.len()];
        for &(name, c) in terms {
            coeffs[self.index(name)?] += c;
        }
        Ok(coeffs)
    }

    /// Adds `Σ terms <= bound`. An infinite bound means no constraint.
    pub fn add_le(&mut self, terms: &[(&str, f64)], bound: f64) -> Result<&mut Self> {
        let coeffs = self.dense(terms)?;
        if bound == f64::INFINITY {
            return Ok(self);
        }
        if bound.is_nan() || bound == f64::NEG_INFINITY || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("non-finite inequality"));
        }
        self.rows.push(Inequality { coeffs, bound });
        Ok(self)
    }

    pub fn add_ge(&mut self, terms: &[(&str, f64)], bound: f64) -> Result<&mut Self> {
        let neg: Vec<(&str, f64)> = terms.iter().map(|&(n, c)| (n, -c)).collect();
        self.add_le(&neg, -bound)
    }

    pub fn add_eq(&mut self, terms: &[(&str, f64)], value: f64) -> Result<&mut Self> {
        self.add_le(terms, value)?;
        self.add_ge(terms, value)
    }

    pub fn add_nonnegative(&mut self, names: &[&str]) -> Result<&mut Self> {
        for &n in names {
            self.add_ge(&[(n, 1.0)], 0.0)?;
        }
        Ok(self)
    }

    /// True when `x` (indexed like [`variables`](Self::variables)) satisfies
    /// every row within `slack`.
    pub fn satisfied_by(&self, x: &[f64], slack: f64) -> bool {
        self.rows.iter().all(|r| {
            let lhs: f64 = r.coeffs.iter().zip(x).map(|(c, v)| c * v).sum();
            lhs <= r.bound + slack
        })
    }

    /// Projects onto `keep = [R₁, R₂]` (intersected with the nonnegative
    /// quadrant). Infeasible systems give an empty region.
    pub fn project(&self, keep: [&str; 2]) -> Result<RateRegion> {
        let ki = self.index(keep[0])?;
        let kj = self.index(keep[1])?;
        if ki == kj {
            return Err(Error::domain("projection needs two distinct variables"));
        }
        let track = self.rows.len() <= 128;
        let mut rows = Vec::with_capacity(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            let row = Row {
                coeffs: r.coeffs.clone(),
                bound: r.bound,
                history: track.then(|| 1u128 << i),
            };
            if push(&mut rows, row).is_err() {
                return Ok(RateRegion::empty());
            }
        }

        let mut eliminated = 0usize;
        for v in 0..self.variables.len() {
            if v == ki || v == kj {
                continue;
            }
            eliminated += 1;
            rows = match eliminate(rows, v, eliminated) {
                Ok(r) => r,
                Err(Infeasible) => return Ok(RateRegion::empty()),
            };
        }

        let halfplanes: Vec<HalfPlane> = rows
            .iter()
            .filter_map(|r| HalfPlane::new(r.coeffs[ki], r.coeffs[kj], r.bound))
            .collect();
        RateRegion::from_halfplanes(&halfplanes)
    }
}

fn eliminate(
    rows: Vec<Row>,
    var: usize,
    eliminated: usize,
) -> std::result::Result<Vec<Row>, Infeasible> {
    let (mut pos, mut neg, mut out) = (Vec::new(), Vec::new(), Vec::new());
    for mut r in rows {
        let c = r.coeffs[var];
        if c > EPS {
            pos.push(r);
        } else if c < -EPS {
            neg.push(r);
        } else {
            r.coeffs[var] = 0.0;
            out.push(r);
        }
    }
    for p in &pos {
        for n in &neg {
            let history = match (p.history, n.history) {
                (Some(a), Some(b)) => Some(a | b),
                _ => None,
            };
            // Chernikov: after k eliminations an irredundant row combines
            // at most k + 1 originals.
            if history.is_some_and(|h| h.count_ones() as usize > eliminated + 1) {
                continue;
            }
            let (wp, wn) = (-n.coeffs[var], p.coeffs[var]);
            let mut coeffs: Vec<f64> = p
                .coeffs
                .iter()
                .zip(&n.coeffs)
                .map(|(a, b)| wp * a + wn * b)
                .collect();
            coeffs[var] = 0.0;
            let row = Row {
                coeffs,
                bound: wp * p.bound + wn * n.bound,
                history,
            };
            push(&mut out, row)?;
        }
    }
    Ok(dedup(out))
}

/// Among rows with the same normalized coefficients keep the tightest.
fn dedup(rows: Vec<Row>) -> Vec<Row> {
    let mut out: Vec<Row> = Vec::with_capacity(rows.len());
    for r in rows {
        if let Some(existing) = out.iter_mut().find(|e| e.same_as(&r)) {
            if r.bound < existing.bound {
                *existing = r;
            }
        } else {
            out.push(r);
        }
    }
    out
}

/// Projects `sys` onto the two named variables.
pub fn fourier_motzkin_project(sys: &LinearSystem, keep: [&str; 2]) -> Result<RateRegion> {
    sys.project(keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{pentagon_to_region, Pentagon};

    /// `R₁ = S₁`, `R₂ = S₂ + T₂`, all rates nonnegative.
    fn toy(extra_sum: bool) -> LinearSystem {
        let mut s = LinearSystem::new(&["R1", "R2", "S1", "S2", "T2"]).unwrap();
        s.add_eq(&[("R1", 1.0), ("S1", -1.0)], 0.0).unwrap();
        s.add_eq(&[("R2", 1.0), ("S2", -1.0), ("T2", -1.0)], 0.0).unwrap();
        s.add_nonnegative(&["S1", "S2", "T2"]).unwrap();
        s.add_le(&[("S1", 1.0)], 1.0).unwrap();
        s.add_le(&[("T2", 1.0)], 1.0).unwrap();
        s.add_le(&[("S1", 1.0), ("T2", 1.0)], 1.5).unwrap();
        s.add_le(&[("S2", 1.0)], 1.0).unwrap();
        if extra_sum {
            s.add_le(&[("S2", 1.0), ("T2", 1.0)], 1.5).unwrap();
        }
        s
    }

    #[test]
    fn toy_with_direct_sum_bound_is_rectangle() {
        // By hand: R₁ <= 1, R₂ <= 1.5, R₁ + R₂ <= 2.5 (inactive).
        let r = fourier_motzkin_project(&toy(true), ["R1", "R2"]).unwrap();
        let expected = pentagon_to_region(&Pentagon::new(1.0, 1.5, 2.5).unwrap());
        assert!(r.hausdorff(&expected) < 1e-12, "{:?}", r.vertices());
    }

    #[test]
    fn toy_without_direct_sum_bound_is_pentagon() {
        // By hand: R₁ <= 1, R₂ <= 2, R₁ + R₂ <= 2.5.
        let r = fourier_motzkin_project(&toy(false), ["R1", "R2"]).unwrap();
        let expected = pentagon_to_region(&Pentagon::new(1.0, 2.0, 2.5).unwrap());
        assert!(r.hausdorff(&expected) < 1e-12, "{:?}", r.vertices());
        assert_eq!(r.halfplanes().len(), 5);
    }

    #[test]
    fn no_op_projection() {
        let mut s = LinearSystem::new(&["x", "y"]).unwrap();
        s.add_le(&[("x", 1.0)], 2.0).unwrap();
        s.add_le(&[("y", 1.0)], 1.0).unwrap();
        s.add_le(&[("x", 1.0), ("y", 1.0)], 2.5).unwrap();
        let r = s.project(["x", "y"]).unwrap();
        let expected = pentagon_to_region(&Pentagon::new(2.0, 1.0, 2.5).unwrap());
        assert!(r.hausdorff(&expected) < 1e-12);
    }

    #[test]
    fn unbounded_and_infeasible() {
        let mut s = LinearSystem::new(&["x", "y", "z"]).unwrap();
        s.add_le(&[("x", 1.0), ("z", -1.0)], 0.0).unwrap();
        s.add_le(&[("y", 1.0)], 1.0).unwrap();
        assert_eq!(s.project(["x", "y"]), Err(Error::UnboundedProjection));

        let mut s = LinearSystem::new(&["x", "y", "z"]).unwrap();
        s.add_le(&[("z", 1.0)], 1.0).unwrap();
        s.add_ge(&[("z", 1.0)], 2.0).unwrap();
        s.add_le(&[("x", 1.0), ("y", 1.0)], 1.0).unwrap();
        assert!(s.project(["x", "y"]).unwrap().is_empty());
    }

    #[test]
    fn unknown_and_duplicate_variables() {
        let mut s = LinearSystem::new(&["x", "y"]).unwrap();
        assert_eq!(
            s.add_le(&[("w", 1.0)], 1.0).err(),
            Some(Error::UnknownVariable("w".into()))
        );
        assert!(LinearSystem::new(&["x", "x"]).is_err());
        assert!(s.project(["x", "x"]).is_err());
    }

    /// Projection of a bounded polytope equals the hull of its projected
    /// vertices; enumerate vertices by brute force as an independent route.
    fn vertex_oracle(sys: &LinearSystem) -> RateRegion {
        use nalgebra::{DMatrix, DVector};
        let n = sys.variables().len();
        let rows = sys.rows();
        let m = rows.len();
        let mut pts = Vec::new();
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            let a = DMatrix::from_fn(n, n, |i, j| rows[idx[i]].coeffs[j]);
            let b = DVector::from_fn(n, |i, _| rows[idx[i]].bound);
            if let Some(x) = a.lu().solve(&b) {
                let x: Vec<f64> = x.iter().copied().collect();
                if x.iter().all(|v| v.is_finite()) && sys.satisfied_by(&x, 1e-9) {
                    pts.push([x[0], x[1]]);
                }
            }
            // Next n-combination of 0..m.
            let mut k = n;
            while k > 0 && idx[k - 1] == m - n + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for j in k..n {
                idx[j] = idx[j - 1] + 1;
            }
        }
        RateRegion::downward_hull(pts)
    }

    proptest::proptest! {
        #[test]
        fn matches_vertex_enumeration(
            caps in proptest::collection::vec(0.2f64..3.0, 4),
            mix in proptest::collection::vec(proptest::collection::vec(0.0f64..2.0, 4), 3),
            bounds in proptest::collection::vec(0.5f64..4.0, 3),
        ) {
            let names = ["a", "b", "c", "d"];
            let mut s = LinearSystem::new(&names).unwrap();
            s.add_nonnegative(&names).unwrap();
            for (n, &c) in names.iter().zip(&caps) {
                s.add_le(&[(n, 1.0)], c).unwrap();
            }
            for (row, &b) in mix.iter().zip(&bounds) {
                let terms: Vec<(&str, f64)> = names.iter().copied().zip(row.iter().copied()).collect();
                s.add_le(&terms, b).unwrap();
            }
            let fm = s.project(["a", "b"]).unwrap();
            let oracle = vertex_oracle(&s);
            proptest::prop_assert!(fm.hausdorff(&oracle) < 1e-7,
                "fm {:?} oracle {:?}", fm.vertices(), oracle.vertices());
        }
    }
}

