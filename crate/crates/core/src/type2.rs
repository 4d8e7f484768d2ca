//! Type II channel: the relay link runs from the interfered receiver to the
//! interference-free receiver.
//!
//! The link rate `R₀ = r_a + r_b` is split between a Wyner-Ziv description
//! of the interfered receiver's view of the private message (`r_a`) and a
//! bin index of the already decoded common message (`r_b`). Before
//! quantizing, the relay subtracts its own user's signal and a multiple
//! `-α` of the common message.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    check_boundary_concavity, pareto_pentagons, union_area, Pentagon, Point, RateRegion,
    DEFAULT_CONCAVITY_TOL,
};
use crate::math::{classify_type2, exp2_2r_m1, half_log2_1p as g, inr2_section, pow2_2r, ChannelParams, RegimeLabel};
use crate::type1::{sum_capacity_no_relay, CurvePoint, PowerSplit};
use crate::{linspace, sample_curve, HullCheck, RegionKind, RegionResult, SweepConfig};

/// Relay strategy: combination coefficient, power split and link split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Type2Scheme {
    alpha: f64,
    beta: f64,
    ra: f64,
    rb: f64,
}

impl Type2Scheme {
    /// Validates `r_a, r_b >= 0` and `r_a + r_b <= R₀`. With `r_a = 0` the
    /// coefficient has no effect and is stored as `0`.
    pub fn new(p: &ChannelParams, alpha: f64, beta: f64, ra: f64, rb: f64) -> Result<Self> {
        let beta = PowerSplit::new(beta)?.beta();
        if !alpha.is_finite() {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
            });
        }
        for (name, v) in [("ra", ra), ("rb", rb)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter { name, value: v });
            }
        }
        if ra + rb > p.r0() * (1.0 + 1e-12) + 1e-12 {
            return Err(Error::RelayBudget {
                used: ra + rb,
                available: p.r0(),
            });
        }
        Ok(Type2Scheme {
            alpha: if ra == 0.0 { 0.0 } else { alpha },
            beta,
            ra,
            rb,
        })
    }

    /// Scheme that spends the whole link: `r_b = R₀ - r_a`.
    pub fn saturated(p: &ChannelParams, alpha: f64, beta: f64, ra: f64) -> Result<Self> {
        Self::new(p, alpha, beta, ra, (p.r0() - ra).max(0.0))
    }

    /// Pure compress-forward at the optimal coefficient; optimal in the
    /// weak regime.
    pub fn pure_quantization(p: &ChannelParams, beta: f64) -> Result<Self> {
        Self::new(p, alpha_star(p, beta), beta, p.r0(), 0.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn ra(&self) -> f64 {
        self.ra
    }
    pub fn rb(&self) -> f64 {
        self.rb
    }
}

/// Quantizer noise and the information the description carries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantizerStats {
    /// `σ²/N`; `+∞` when `r_a = 0`.
    pub sigma2_over_n: f64,
    /// Information about the private message given the common one.
    pub zeta: f64,
    /// Information about both messages.
    pub eta: f64,
}

/// Quantizer statistics for arbitrary `(α, β, r_a)`.
pub fn quantizer_stats_raw(p: &ChannelParams, alpha: f64, beta: f64, ra: f64) -> Result<QuantizerStats> {
    if ra.is_nan() || ra < 0.0 {
        return Err(Error::domain(format!("r_a must be nonnegative, got {ra}")));
    }
    let beta = PowerSplit::new(beta)?.beta();
    if ra == 0.0 {
        return Ok(QuantizerStats {
            sigma2_over_n: f64::INFINITY,
            zeta: 0.0,
            eta: 0.0,
        });
    }
    let (s2, i) = (p.snr2(), p.inr2());
    let bb = 1.0 - beta;
    // Power of the relay's view of transmitter 2, beyond the private part.
    let leak = (1.0 + 2.0 * alpha * bb + alpha * alpha * bb) * i + beta * bb * alpha * alpha * i * s2;
    let sigma2 = (1.0 + s2 + leak) / (exp2_2r_m1(ra) * (1.0 + s2));
    Ok(QuantizerStats {
        sigma2_over_n: sigma2,
        zeta: g(beta * i / ((1.0 + beta * s2) * (1.0 + sigma2))),
        eta: g(leak / ((1.0 + s2) * (1.0 + sigma2))),
    })
}

pub fn quantizer_stats(p: &ChannelParams, s: &Type2Scheme) -> Result<QuantizerStats> {
    quantizer_stats_raw(p, s.alpha, s.beta, s.ra)
}

/// Coefficient minimizing the quantization noise: `-1/(1+β·SNR₂)`.
pub fn alpha_star(p: &ChannelParams, beta: f64) -> f64 {
    -1.0 / (1.0 + beta * p.snr2())
}

/// Upward shift of the no-relay boundary at power split `β` when the whole
/// link carries the optimal quantizer.
pub fn delta_weak(p: &ChannelParams, beta: f64) -> Result<f64> {
    let beta = PowerSplit::new(beta)?.beta();
    let (s2, i, r0) = (p.snr2(), p.inr2(), p.r0());
    if r0 == 0.0 || beta == 0.0 {
        return Ok(0.0);
    }
    let k = pow2_2r(r0);
    Ok(g(beta * exp2_2r_m1(r0) * i / (k * (1.0 + beta * s2) + beta * i)))
}

/// Pentagon of rate pairs achievable with one scheme.
pub fn pentagon_type2(p: &ChannelParams, s: &Type2Scheme) -> Result<Pentagon> {
    let (s1, s2, i) = (p.snr1(), p.snr2(), p.inr2());
    let (b, bb) = (s.beta, 1.0 - s.beta);
    let q = quantizer_stats(p, s)?;
    let r1 = g(s1 / (1.0 + b * i));
    let r2 = (g(s2) + s.rb + q.eta).min(g(b * s2) + g(bb * i / (1.0 + b * i)) + q.zeta);
    let sum = g(b * s2) + g((s1 + bb * i) / (1.0 + b * i)) + q.zeta;
    Pentagon::new(r1, r2, sum)
}

fn weak_point(p: &ChannelParams, beta: f64) -> Result<Point> {
    let (s1, s2, i) = (p.snr1(), p.snr2(), p.inr2());
    let bb = 1.0 - beta;
    Ok([
        g(s1 / (1.0 + beta * i)),
        g(beta * s2) + g(bb * i / (1.0 + s1 + beta * i)) + delta_weak(p, beta)?,
    ])
}

/// Samples of the weak-regime boundary curve. Weak regime only.
pub fn weak_curve(p: &ChannelParams, betas: &[f64]) -> Result<Vec<CurvePoint>> {
    let label = classify_type2(p).label;
    if label != RegimeLabel::Weak {
        return Err(Error::RegimeMismatch(label));
    }
    betas
        .iter()
        .map(|&b| {
            let [r1, r2] = weak_point(p, b)?;
            Ok(CurvePoint { beta: b, r1, r2 })
        })
        .collect()
}

/// Region of the Type II channel using the default sweep density.
pub fn region_type2(p: &ChannelParams) -> Result<RegionResult> {
    region_type2_with(p, &SweepConfig::default())
}

pub fn region_type2_with(p: &ChannelParams, cfg: &SweepConfig) -> Result<RegionResult> {
    cfg.validate()?;
    let regime = classify_type2(p);
    let (s1, s2, i, r0) = (p.snr1(), p.snr2(), p.inr2(), p.r0());
    let result = match regime.label {
        RegimeLabel::Weak => {
            let mut boundary: Vec<Point> = Vec::with_capacity(cfg.beta_points + 1);
            let top = weak_point(p, 1.0)?;
            boundary.push([0.0, top[1]]);
            let curve = sample_curve(|b| weak_point(p, b), 1.0, 0.0, cfg.beta_points, cfg.curve_tol)?;
            for (_, pt) in curve {
                if pt[0] > boundary[boundary.len() - 1][0] {
                    boundary.push(pt);
                }
            }
            let report = check_boundary_concavity(&boundary, DEFAULT_CONCAVITY_TOL)?;
            boundary.push([g(s1), 0.0]);
            RegionResult {
                region: RateRegion::downward_hull(boundary),
                regime,
                kind: RegionKind::Achievable,
                hull_check: HullCheck::CurveConcavity(report),
            }
        }
        RegimeLabel::ModeratelyStrong => {
            let pentagons = pareto_pentagons(&moderate_pentagons(p, cfg)?);
            let regions: Vec<RateRegion> = pentagons.iter().map(Pentagon::to_region).collect();
            let hull = RateRegion::downward_hull(pentagons.iter().flat_map(|q| q.corners()));
            RegionResult {
                hull_check: HullCheck::UnionArea {
                    hull_area: hull.area(),
                    union_area: union_area(&regions),
                },
                region: hull,
                regime,
                kind: RegionKind::Achievable,
            }
        }
        RegimeLabel::Strong => RegionResult {
            region: Pentagon::new(g(s1), g(s2) + r0, g(s1 + i))?.to_region(),
            regime,
            kind: RegionKind::Capacity,
            hull_check: HullCheck::SinglePolygon,
        },
        RegimeLabel::VeryStrong => RegionResult {
            region: Pentagon::rectangle(g(s1), g(s2) + r0)?.to_region(),
            regime,
            kind: RegionKind::Capacity,
            hull_check: HullCheck::SinglePolygon,
        },
    };
    Ok(result)
}

/// Pentagons over the `(β, r_a, α)` grid with the link saturated. The
/// coefficient grid is centred on the optimum for each `β`; at `r_a = 0`
/// it collapses to a single inert value.
pub fn moderate_pentagons(p: &ChannelParams, cfg: &SweepConfig) -> Result<Vec<Pentagon>> {
    cfg.validate()?;
    let r0 = p.r0();
    let ras = if r0 == 0.0 {
        vec![0.0]
    } else {
        linspace(0.0, r0, cfg.ms_ra_points)
    };
    let mut out = Vec::with_capacity(cfg.ms_beta_points * ras.len() * cfg.ms_alpha_points);
    for beta in linspace(0.0, 1.0, cfg.ms_beta_points) {
        let centre = alpha_star(p, beta);
        for &ra in &ras {
            let alphas = if ra == 0.0 {
                vec![0.0]
            } else {
                linspace(centre - 1.0, centre + 1.0, cfg.ms_alpha_points)
            };
            for alpha in alphas {
                let s = Type2Scheme::saturated(p, alpha, beta, ra)?;
                out.push(pentagon_type2(p, &s)?);
            }
        }
    }
    Ok(out)
}

/// Sum capacity with an unlimited link, compared with no link at all.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfiniteRelaySum {
    pub c_inf: f64,
    pub c0: f64,
    pub gain: f64,
    pub inr2_section: f64,
    /// `INR₂ <= INR₂§`, where the gain is at most half a bit.
    pub within_half_bit: bool,
}

pub fn sum_capacity_infinite_relay(p: &ChannelParams) -> InfiniteRelaySum {
    let (s1, s2, i) = (p.snr1(), p.snr2(), p.inr2());
    let c_inf = g(s1 + i) + g(s2 / (1.0 + i));
    let c0 = sum_capacity_no_relay(p);
    let section = inr2_section(p);
    InfiniteRelaySum {
        c_inf,
        c0,
        gain: c_inf - c0,
        inr2_section: section,
        within_half_bit: i <= section,
    }
}
