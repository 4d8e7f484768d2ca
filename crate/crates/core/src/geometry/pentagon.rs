use serde::Serialize;

use super::region::RateRegion;
use crate::error::{Error, Result};

/// `{R₁ <= r1_max, R₂ <= r2_max, R₁ + R₂ <= sum_max}` in the nonnegative
/// quadrant. Any bound may be `+∞` for a missing constraint, as long as the
/// region stays bounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pentagon {
    pub r1_max: f64,
    pub r2_max: f64,
    pub sum_max: f64,
}

impl Pentagon {
    pub fn new(r1_max: f64, r2_max: f64, sum_max: f64) -> Result<Self> {
        for (name, v) in [("r1_max", r1_max), ("r2_max", r2_max), ("sum_max", sum_max)] {
            if v.is_nan() || v < 0.0 {
                return Err(Error::InvalidParameter { name, value: v });
            }
        }
        let bounded = sum_max.is_finite() || (r1_max.is_finite() && r2_max.is_finite());
        if !bounded {
            return Err(Error::domain("pentagon is unbounded"));
        }
        Ok(Pentagon {
            r1_max,
            r2_max,
            sum_max,
        })
    }

    pub fn rectangle(r1_max: f64, r2_max: f64) -> Result<Self> {
        Self::new(r1_max, r2_max, f64::INFINITY)
    }

    /// Effective per-user bounds after clipping by the sum constraint.
    fn clipped(&self) -> (f64, f64) {
        (self.r1_max.min(self.sum_max), self.r2_max.min(self.sum_max))
    }

    /// True when the sum constraint does not cut the box.
    pub fn is_rectangle(&self) -> bool {
        let (a, b) = self.clipped();
        self.sum_max >= a + b
    }

    /// Lower-right corner: maximal `R₁`, then maximal `R₂`.
    pub fn lower_right(&self) -> [f64; 2] {
        let (a, b) = self.clipped();
        [a, b.min(self.sum_max - a)]
    }

    /// Upper-left corner: maximal `R₂`, then maximal `R₁`.
    pub fn upper_left(&self) -> [f64; 2] {
        let (a, b) = self.clipped();
        [a.min(self.sum_max - b), b]
    }

    pub fn corners(&self) -> [[f64; 2]; 2] {
        [self.lower_right(), self.upper_left()]
    }

    pub fn contains(&self, p: [f64; 2], slack: f64) -> bool {
        p[0] >= -slack
            && p[1] >= -slack
            && p[0] <= self.r1_max + slack
            && p[1] <= self.r2_max + slack
            && p[0] + p[1] <= self.sum_max + slack
    }

    pub fn to_region(&self) -> RateRegion {
        pentagon_to_region(self)
    }
}

/// Region `{(R₁,R₂) >= 0 : R₁ <= r1_max, R₂ <= r2_max, R₁+R₂ <= sum_max}`.
pub fn pentagon_to_region(p: &Pentagon) -> RateRegion {
    RateRegion::downward_hull(p.corners())
}

/// Keeps only pentagons not dominated coordinate-wise in all three bounds
/// by another one; the union of the survivors equals the union of all.
pub fn pareto_pentagons(pentagons: &[Pentagon]) -> Vec<Pentagon> {
    let mut sorted: Vec<Pentagon> = pentagons.to_vec();
    sorted.sort_by(|p, q| {
        q.r1_max
            .total_cmp(&p.r1_max)
            .then(q.r2_max.total_cmp(&p.r2_max))
            .then(q.sum_max.total_cmp(&p.sum_max))
    });
    let mut kept: Vec<Pentagon> = Vec::new();
    for p in sorted {
        let dominated = kept
            .iter()
            .any(|k| k.r2_max >= p.r2_max && k.sum_max >= p.sum_max);
        if !dominated {
            kept.push(p);
        }
    }
    kept
}
