//! Achievable-rate regions, capacity regions, regime thresholds and
//! asymptotic sum capacities of the two-user Gaussian Z-interference channel
//! augmented with a rate-limited digital link between the receivers.
//!
//! Two link directions are covered:
//!
//! * [`type1`]: the link runs from the interference-free receiver to the
//!   interfered receiver. Relaying is decode-and-forward of the common
//!   message (plus a compress-and-forward alternative).
//! * [`type2`]: the link runs from the interfered receiver to the
//!   interference-free receiver. Relaying mixes decode-and-forward of the
//!   common message with Wyner-Ziv compression of the private message.
//!
//! All rates are in bits per **real** channel use: `γ(x) = ½·log₂(1+x)`.
//! All internal computation is in linear scale; dB is only accepted at the
//! I/O boundary ([`math::from_db`], [`ChannelParams::from_db`]).
//!
//! The [`oracle`] module is an independent log-determinant engine for
//! jointly Gaussian systems, used to cross-check every closed-form
//! information quantity. [`verify`] bundles the cross-checks into seeded,
//! deterministic suites.

pub mod error;
pub mod geometry;
pub mod math;
pub mod oracle;
pub mod type1;
pub mod type2;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{HalfPlane, Pentagon, RateRegion};
pub use math::{classify_type1, classify_type2, gamma, ChannelParams, Regime, RegimeLabel};

/// Whether a computed region is a proven capacity region or only achievable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    Achievable,
    Capacity,
}

/// Evidence about whether the convex hull changed the raw union of regions.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HullCheck {
    /// The region is a single polygon; no union was taken.
    SinglePolygon,
    /// Closed-form boundary curve; the hull is neutral iff the sampled curve is concave.
    CurveConcavity(geometry::ConcavityReport),
    /// Union of sampled polygons; `hull_area - union_area` is the area the hull added.
    UnionArea { hull_area: f64, union_area: f64 },
}

impl HullCheck {
    /// True when the hull added nothing beyond `rel_tol` of the region area.
    pub fn hull_needed(&self, rel_tol: f64) -> bool {
        match self {
            HullCheck::SinglePolygon => false,
            HullCheck::CurveConcavity(r) => !(r.monotone_ok && r.concave_ok),
            HullCheck::UnionArea {
                hull_area,
                union_area,
            } => hull_area - union_area > rel_tol * hull_area.max(f64::MIN_POSITIVE),
        }
    }
}

/// A region together with the regime that selected its formula.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RegionResult {
    pub region: RateRegion,
    pub regime: Regime,
    pub kind: RegionKind,
    pub hull_check: HullCheck,
}

/// Sampling densities for swept regions.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SweepConfig {
    /// Initial samples of the power split along closed-form boundary curves.
    pub beta_points: usize,
    /// Intervals whose midpoint lies farther than this (bits) from the chord
    /// are bisected; zero disables refinement.
    pub curve_tol: f64,
    /// Moderately-strong Type II grid: combination coefficient samples.
    pub ms_alpha_points: usize,
    /// Moderately-strong Type II grid: power split samples.
    pub ms_beta_points: usize,
    /// Moderately-strong Type II grid: compress-forward share samples.
    pub ms_ra_points: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            beta_points: 201,
            curve_tol: 1e-7,
            ms_alpha_points: 41,
            ms_beta_points: 41,
            ms_ra_points: 17,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("beta_points", self.beta_points),
            ("ms_alpha_points", self.ms_alpha_points),
            ("ms_beta_points", self.ms_beta_points),
            ("ms_ra_points", self.ms_ra_points),
        ];
        for (name, n) in fields {
            if n < 2 {
                return Err(Error::InvalidParameter {
                    name,
                    value: n as f64,
                });
            }
        }
        if !(self.curve_tol >= 0.0 && self.curve_tol.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "curve_tol",
                value: self.curve_tol,
            });
        }
        Ok(())
    }
}

const MAX_BISECTIONS: u32 = 24;

/// Samples `f` on `[lo, hi]` (either order): `n` even samples, then
/// bisection of every interval whose midpoint is more than `tol` off the
/// chord. Returns `(parameter, point)` pairs in parameter order.
pub(crate) fn sample_curve<F>(f: F, lo: f64, hi: f64, n: usize, tol: f64) -> Result<Vec<(f64, geometry::Point)>>
where
    F: Fn(f64) -> Result<geometry::Point>,
{
    fn refine<F: Fn(f64) -> Result<geometry::Point>>(
        f: &F,
        a: (f64, geometry::Point),
        b: (f64, geometry::Point),
        tol: f64,
        depth: u32,
        out: &mut Vec<(f64, geometry::Point)>,
    ) -> Result<()> {
        if depth > 0 && tol > 0.0 {
            let t = 0.5 * (a.0 + b.0);
            let m = f(t)?;
            let (dx, dy) = (b.1[0] - a.1[0], b.1[1] - a.1[1]);
            let len = dx.hypot(dy);
            let off = if len > 0.0 {
                (dx * (m[1] - a.1[1]) - dy * (m[0] - a.1[0])).abs() / len
            } else {
                (m[0] - a.1[0]).hypot(m[1] - a.1[1])
            };
            if off > tol {
                refine(f, a, (t, m), tol, depth - 1, out)?;
                return refine(f, (t, m), b, tol, depth - 1, out);
            }
        }
        out.push(b);
        Ok(())
    }
    let seeds = linspace(lo, hi, n);
    let mut prev = (seeds[0], f(seeds[0])?);
    let mut out = vec![prev];
    for &t in &seeds[1..] {
        let next = (t, f(t)?);
        refine(&f, prev, next, tol, MAX_BISECTIONS, &mut out)?;
        prev = next;
    }
    Ok(out)
}

/// `n >= 2` evenly spaced samples of `[lo, hi]`, endpoints exact.
pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}
