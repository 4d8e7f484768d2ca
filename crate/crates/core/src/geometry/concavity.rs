use serde::Serialize;

use super::region::Point;
use crate::error::{Error, Result};

pub const DEFAULT_CONCAVITY_TOL: f64 = 1e-9;

/// Result of checking that a sampled boundary is non-increasing and concave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcavityReport {
    pub monotone_ok: bool,
    pub concave_ok: bool,
    /// Largest violation seen, in bits (rise for monotonicity, slope
    /// increase for concavity).
    pub max_violation: f64,
}

/// Checks a boundary curve given as points with strictly increasing `R₁`.
/// Monotone means `R₂` never rises by more than `tol`; concave means the
/// chord slopes never increase by more than `tol`.
pub fn check_boundary_concavity(curve: &[Point], tol: f64) -> Result<ConcavityReport> {
    if curve.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
        return Err(Error::domain("curve has non-finite points"));
    }
    if curve.windows(2).any(|w| w[1][0] <= w[0][0]) {
        return Err(Error::domain("curve must have strictly increasing R1"));
    }
    let mut rise: f64 = 0.0;
    for w in curve.windows(2) {
        rise = rise.max(w[1][1] - w[0][1]);
    }
    let slopes: Vec<f64> = curve
        .windows(2)
        .map(|w| (w[1][1] - w[0][1]) / (w[1][0] - w[0][0]))
        .collect();
    let mut bend: f64 = 0.0;
    for s in slopes.windows(2) {
        bend = bend.max(s[1] - s[0]);
    }
    Ok(ConcavityReport {
        monotone_ok: rise <= tol,
        concave_ok: bend <= tol,
        max_violation: rise.max(bend).max(0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_circle_is_concave() {
        let pts: Vec<Point> = (0..50)
            .map(|i| {
                let t = i as f64 / 49.0 * std::f64::consts::FRAC_PI_2;
                [t.sin(), t.cos()]
            })
            .collect();
        let r = check_boundary_concavity(&pts, DEFAULT_CONCAVITY_TOL).unwrap();
        assert!(r.monotone_ok && r.concave_ok, "{r:?}");
    }

    #[test]
    fn detects_bumps() {
        let convex = [[0.0, 1.0], [0.5, 0.2], [1.0, 0.0]];
        let r = check_boundary_concavity(&convex, 1e-9).unwrap();
        assert!(r.monotone_ok && !r.concave_ok);
        let rising = [[0.0, 1.0], [0.5, 1.1], [1.0, 0.0]];
        let r = check_boundary_concavity(&rising, 1e-9).unwrap();
        assert!(!r.monotone_ok);
        assert!((r.max_violation - 0.1).abs() < 1e-12);
    }

    #[test]
    fn rejects_unsorted() {
        assert!(check_boundary_concavity(&[[1.0, 0.0], [0.5, 1.0]], 1e-9).is_err());
        assert!(check_boundary_concavity(&[[1.0, 0.0], [1.0, 1.0]], 1e-9).is_err());
    }
}
