//! Type I channel: the relay link runs from the interference-free receiver
//! to the interfered receiver.
//!
//! Transmitter 2 splits its power into a private part (fraction `β`) and a
//! common part (fraction `β̄ = 1-β`). The interfered receiver decodes the
//! common part with help from bin indices sent over the link.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    check_boundary_concavity, union_area, union_over_sweep, Pentagon, Point, RateRegion,
    DEFAULT_CONCAVITY_TOL,
};
use crate::math::{classify_type1, exp2_2r_m1, half_log2_1p as g, pow2_2r, ChannelParams, RegimeLabel};
use crate::{sample_curve, HullCheck, RegionKind, RegionResult, SweepConfig};

/// Fraction of transmitter 2's power spent on the private message.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct PowerSplit(f64);

impl PowerSplit {
    pub fn new(beta: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&beta) {
            Ok(PowerSplit(beta))
        } else {
            Err(Error::InvalidParameter {
                name: "beta",
                value: beta,
            })
        }
    }

    pub fn beta(self) -> f64 {
        self.0
    }

    /// `β̄ = 1 - β`, the common-message fraction.
    pub fn complement(self) -> f64 {
        1.0 - self.0
    }
}

/// Quantizer of the compress-and-forward alternative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WynerZivParams {
    /// Quantization noise over channel noise; `+∞` when the link is idle.
    pub sigma2_over_n: f64,
    /// Bits of link rate lost to quantization, in `[0, R₀]`.
    pub delta0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CfRatePair {
    pub r1: f64,
    pub r2: f64,
    pub wyner_ziv: WynerZivParams,
}

/// Power split at which the two branches of the `R₂` bound cross.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaStar {
    pub split: PowerSplit,
    /// Value of the closed form before clamping to `[0, 1]`.
    pub unclamped: f64,
    pub clamped: bool,
}

/// One sample of the lower-right corner curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub beta: f64,
    pub r1: f64,
    pub r2: f64,
}

/// Lower-right corner of the `β` pentagon once `R₂ <= γ(SNR₂)` is relaxed.
fn corner(p: &ChannelParams, beta: f64) -> Point {
    let (s1, s2, i) = (p.snr1(), p.snr2(), p.inr2());
    let bb = 1.0 - beta;
    [
        g(s1 / (1.0 + beta * i)),
        g(beta * s2) + g(bb * i / (1.0 + s1 + beta * i)) + p.r0(),
    ]
}

/// Pentagon of rate pairs achievable with a fixed power split.
pub fn pentagon_weak(p: &ChannelParams, split: PowerSplit) -> Pentagon {
    let (s1, s2, i, r0) = (p.snr1(), p.snr2(), p.inr2(), p.r0());
    let (b, bb) = (split.beta(), split.complement());
    let r1 = g(s1 / (1.0 + b * i));
    let r2 = g(s2).min(g(b * s2) + g(bb * i / (1.0 + b * i)) + r0);
    let sum = g(b * s2) + g((s1 + bb * i) / (1.0 + b * i)) + r0;
    Pentagon::new(r1, r2, sum).expect("pentagon bounds are finite and nonnegative")
}

fn require_weak(p: &ChannelParams) -> Result<()> {
    match classify_type1(p).label {
        RegimeLabel::Weak => Ok(()),
        other => Err(Error::RegimeMismatch(other)),
    }
}

/// The closed-form crossing point, clamped to `[0, 1]`, without checking
/// the regime. Errors only on a zero denominator.
pub fn beta_star_unchecked(p: &ChannelParams) -> Result<BetaStar> {
    let (s1, s2, i) = (p.snr1(), p.snr2(), p.inr2());
    let k = pow2_2r(p.r0());
    let num = (1.0 + s1) * (1.0 + s2) - k * (1.0 + s1 + i);
    let den = k * s2 * (1.0 + s1 + i) - i * (1.0 + s2);
    if den == 0.0 || !den.is_finite() {
        return Err(Error::SingularPowerSplit);
    }
    let unclamped = num / den;
    let clamped_value = unclamped.clamp(0.0, 1.0);
    Ok(BetaStar {
        split: PowerSplit(clamped_value),
        unclamped,
        clamped: clamped_value != unclamped,
    })
}

/// Power split where `γ(SNR₂)` equals the corner height; the sum rate
/// along the corner curve is maximal there. Weak regime only.
pub fn beta_star(p: &ChannelParams) -> Result<BetaStar> {
    require_weak(p)?;
    beta_star_unchecked(p)
}

/// Samples of the lower-right corner curve. Weak regime only.
pub fn corner_curve(p: &ChannelParams, betas: &[f64]) -> Result<Vec<CurvePoint>> {
    require_weak(p)?;
    betas
        .iter()
        .map(|&b| {
            let split = PowerSplit::new(b)?;
            let [r1, r2] = corner(p, split.beta());
            Ok(CurvePoint { beta: b, r1, r2 })
        })
        .collect()
}

/// Upper boundary of the weak-regime region with strictly increasing `R₁`:
/// the cap `R₂ = γ(SNR₂)` from the axis to the curve, then the corner
/// curve from `β*` down to `β = 0`.
fn weak_boundary(p: &ChannelParams, cfg: &SweepConfig) -> Result<Vec<Point>> {
    let bs = beta_star(p)?.split.beta();
    let cap = g(p.snr2());
    let mut pts: Vec<Point> = vec![[0.0, cap]];
    let curve = sample_curve(|b| Ok(corner(p, b)), bs, 0.0, cfg.beta_points, cfg.curve_tol)?;
    for (_, [x, y]) in curve {
        let pt = [x, y.min(cap)];
        if pt[0] > pts[pts.len() - 1][0] {
            pts.push(pt);
        }
    }
    Ok(pts)
}

/// Region of the Type I channel using the default sweep density.
pub fn region_type1(p: &ChannelParams) -> Result<RegionResult> {
    region_type1_with(p, &SweepConfig::default())
}

pub fn region_type1_with(p: &ChannelParams, cfg: &SweepConfig) -> Result<RegionResult> {
    cfg.validate()?;
    let regime = classify_type1(p);
    let (s1, s2, i) = (p.snr1(), p.snr2(), p.inr2());
    let result = match regime.label {
        RegimeLabel::Weak => {
            let boundary = weak_boundary(p, cfg)?;
            let report = check_boundary_concavity(&boundary, DEFAULT_CONCAVITY_TOL)?;
            let mut pts = boundary;
            pts.push([g(s1), 0.0]);
            RegionResult {
                region: RateRegion::downward_hull(pts),
                regime,
                kind: RegionKind::Achievable,
                hull_check: HullCheck::CurveConcavity(report),
            }
        }
        RegimeLabel::Strong => RegionResult {
            region: Pentagon::new(g(s1), g(s2), g(s1 + i) + p.r0())?.to_region(),
            regime,
            kind: RegionKind::Capacity,
            hull_check: HullCheck::SinglePolygon,
        },
        RegimeLabel::VeryStrong | RegimeLabel::ModeratelyStrong => RegionResult {
            region: Pentagon::rectangle(g(s1), g(s2))?.to_region(),
            regime,
            kind: RegionKind::Capacity,
            hull_check: HullCheck::SinglePolygon,
        },
    };
    Ok(result)
}

/// Hull and exact union area of the per-split pentagons over a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PentagonSweep {
    pub hull: RateRegion,
    pub union_area: f64,
}

/// Independent route to the weak region: union of [`pentagon_weak`] over
/// `betas`, for comparison with the closed-form boundary.
pub fn region_type1_by_union(p: &ChannelParams, betas: &[f64]) -> Result<PentagonSweep> {
    let regions: Vec<RateRegion> = betas
        .iter()
        .map(|&b| Ok(pentagon_weak(p, PowerSplit::new(b)?).to_region()))
        .collect::<Result<_>>()?;
    Ok(PentagonSweep {
        hull: union_over_sweep(&regions)?,
        union_area: union_area(&regions),
    })
}

/// Sum capacity of the channel without a relay link (`R₀` ignored).
pub fn sum_capacity_no_relay(p: &ChannelParams) -> f64 {
    let (s1, s2, i) = (p.snr1(), p.snr2(), p.inr2());
    if i <= s2 {
        g(s2) + g(s1 / (1.0 + i))
    } else if i <= s2 * (1.0 + s1) {
        g(s1 + i)
    } else {
        g(s1) + g(s2)
    }
}

/// Largest sum rate of the weak-regime region restricted to one split.
fn sum_rate_at(p: &ChannelParams, beta: f64) -> f64 {
    let [x, y] = corner(p, beta);
    x + y.min(g(p.snr2()))
}

/// Compress-and-forward alternative: the interference-free receiver
/// quantizes its observation and the interfered receiver decodes its own
/// message from both signals, treating the interference as noise.
pub fn cf_rate_pair_type1(p: &ChannelParams) -> CfRatePair {
    let (s1, s2, i, r0) = (p.snr1(), p.snr2(), p.inr2(), p.r0());
    let base = g(s1 / (1.0 + i));
    let r2 = g(s2);
    if r0 == 0.0 {
        return CfRatePair {
            r1: base,
            r2,
            wyner_ziv: WynerZivParams {
                sigma2_over_n: f64::INFINITY,
                delta0: 0.0,
            },
        };
    }
    let t = exp2_2r_m1(r0);
    // Variance of the relay observation given the destination's own signal.
    let side = 1.0 + s2 * (1.0 + s1) / (1.0 + s1 + i);
    let delta0 = g(t * (1.0 + s2 + i) * (1.0 + s1 + i) / ((1.0 + i) * ((1.0 + s1) * (1.0 + s2) + i)));
    CfRatePair {
        r1: base + r0 - delta0,
        r2,
        wyner_ziv: WynerZivParams {
            sigma2_over_n: side / t,
            delta0,
        },
    }
}

/// Scheme whose sum rate is compared with `C_sum(0) + R₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum AsymptoticScheme {
    /// Power split at the crossing point of each scaled channel.
    BetaStar,
    /// A power split held fixed across scales.
    FixedBeta(f64),
    CompressForward,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticPoint {
    /// Common factor applied to all three signal ratios.
    pub scale: f64,
    pub sum_rate: f64,
    /// `C_sum(0) + R₀` at this scale.
    pub reference: f64,
    /// `sum_rate - reference`.
    pub gap: f64,
}

/// Sum-rate gap to `C_sum(0) + R₀` as the noise vanishes: the ratios are
/// multiplied by `10^k` for `k = 0..n_scalings`.
pub fn asymptotic_sum_gain_type1(
    p: &ChannelParams,
    n_scalings: usize,
    scheme: AsymptoticScheme,
) -> Result<Vec<AsymptoticPoint>> {
    if let AsymptoticScheme::FixedBeta(b) = scheme {
        PowerSplit::new(b)?;
    }
    (0..n_scalings)
        .map(|k| {
            let scale = 10f64.powi(k as i32);
            let q = p.scaled(scale)?;
            let label = classify_type1(&q).label;
            if label != RegimeLabel::Weak {
                return Err(Error::RegimeViolatedAtScale { scale, label });
            }
            let sum_rate = match scheme {
                AsymptoticScheme::BetaStar => sum_rate_at(&q, beta_star(&q)?.split.beta()),
                AsymptoticScheme::FixedBeta(b) => sum_rate_at(&q, b),
                AsymptoticScheme::CompressForward => {
                    let cf = cf_rate_pair_type1(&q);
                    cf.r1 + cf.r2
                }
            };
            let reference = sum_capacity_no_relay(&q) + q.r0();
            Ok(AsymptoticPoint {
                scale,
                sum_rate,
                reference,
                gap: sum_rate - reference,
            })
        })
        .collect()
}

/// `lim β*` as the noise vanishes with fixed ratios.
pub fn beta_star_noise_free_limit(p: &ChannelParams) -> f64 {
    let k = (-2.0 * p.r0() * std::f64::consts::LN_2).exp();
    k / (1.0 + (1.0 - k) * p.inr2() / p.snr1())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::gamma;
    use proptest::prelude::*;

    fn fig5() -> ChannelParams {
        ChannelParams::from_db(25.0, 25.0, 20.0, 1.0).unwrap()
    }

    #[test]
    fn full_private_split_is_rectangle() {
        let p = fig5();
        let pent = pentagon_weak(&p, PowerSplit::new(1.0).unwrap());
        assert!(pent.is_rectangle());
        assert!((pent.r1_max - gamma(p.snr1() / (1.0 + p.inr2())).unwrap()).abs() < 1e-15);
        assert!((pent.r2_max - gamma(p.snr2()).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn all_common_split_without_relay_is_classical() {
        let p = ChannelParams::new(40.0, 30.0, 12.0, 0.0).unwrap();
        let pent = pentagon_weak(&p, PowerSplit::new(0.0).unwrap());
        assert!((pent.r1_max - gamma(40.0).unwrap()).abs() < 1e-15);
        assert!((pent.r2_max - gamma(12.0).unwrap().min(gamma(30.0).unwrap())).abs() < 1e-15);
        assert!((pent.sum_max - gamma(52.0).unwrap()).abs() < 1e-14);
    }

    /// Bisection on the difference of the two `R₂` branches.
    fn crossing_by_bisection(p: &ChannelParams) -> f64 {
        let f = |b: f64| corner(p, b)[1] - gamma(p.snr2()).unwrap();
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn beta_star_equalizes_branches() {
        let p = fig5();
        let bs = beta_star(&p).unwrap();
        assert!(!bs.clamped);
        let b = bs.split.beta();
        assert!((corner(&p, b)[1] - gamma(p.snr2()).unwrap()).abs() < 1e-9);
        assert!((b - crossing_by_bisection(&p)).abs() < 1e-9);
    }

    #[test]
    fn beta_star_edge_cases() {
        let p = ChannelParams::new(50.0, 80.0, 20.0, 0.0).unwrap();
        assert!((beta_star(&p).unwrap().split.beta() - 1.0).abs() < 1e-12);
        let big = ChannelParams::new(50.0, 80.0, 20.0, 6.0).unwrap();
        assert!(matches!(beta_star(&big), Err(Error::RegimeMismatch(_))));
        let bs = beta_star_unchecked(&big).unwrap();
        assert!(bs.clamped && bs.unclamped < 0.0 && bs.split.beta() == 0.0);
        let strong = ChannelParams::new(50.0, 80.0, 90.0, 0.0).unwrap();
        assert!(beta_star(&strong).is_err());
    }

    #[test]
    fn beta_star_limit() {
        let p = fig5();
        let q = p.scaled(1e12).unwrap();
        let b = beta_star(&q).unwrap().split.beta();
        assert!((b - beta_star_noise_free_limit(&p)).abs() < 1e-6);
    }

    #[test]
    fn corner_curve_endpoints() {
        let p = fig5();
        let c = corner_curve(&p, &[0.0, 1.0]).unwrap();
        let (s1, s2, i, r0) = (p.snr1(), p.snr2(), p.inr2(), p.r0());
        assert!((c[0].r1 - gamma(s1).unwrap()).abs() < 1e-15);
        assert!((c[0].r2 - gamma(i / (1.0 + s1)).unwrap() - r0).abs() < 1e-14);
        assert!((c[1].r1 - gamma(s1 / (1.0 + i)).unwrap()).abs() < 1e-15);
        assert!((c[1].r2 - gamma(s2).unwrap() - r0).abs() < 1e-14);
        assert!(corner_curve(&p, &[1.5]).is_err());
    }

    #[test]
    fn regions_by_regime() {
        let p = ChannelParams::from_db(25.0, 25.0, 30.0, 2.0).unwrap();
        let r = region_type1(&p).unwrap();
        assert_eq!(r.regime.label, RegimeLabel::Strong);
        assert_eq!(r.kind, RegionKind::Capacity);
        let r = region_type1(&p.with_r0(4.0).unwrap()).unwrap();
        assert_eq!(r.regime.label, RegimeLabel::VeryStrong);
        assert_eq!(r.region.vertices().len(), 4);
        let r = region_type1(&fig5()).unwrap();
        assert_eq!(r.regime.label, RegimeLabel::Weak);
        assert!(!r.hull_check.hull_needed(0.0));
    }

    #[test]
    fn weak_max_sum_is_at_beta_star() {
        let p = fig5();
        let r = region_type1(&p).unwrap();
        let b = beta_star(&p).unwrap().split.beta();
        let expected = corner(&p, b)[0] + gamma(p.snr2()).unwrap();
        assert!((r.region.max_sum_rate() - expected).abs() < 1e-12);
    }

    #[test]
    fn sum_capacity_pieces() {
        let p = ChannelParams::new(100.0, 100.0, 10.0, 0.0).unwrap();
        let v = gamma(100.0).unwrap() + gamma(100.0 / 11.0).unwrap();
        assert!((sum_capacity_no_relay(&p) - v).abs() < 1e-14);
        let p = ChannelParams::new(7.0, 9.0, 0.0, 0.0).unwrap();
        assert!((sum_capacity_no_relay(&p) - gamma(7.0).unwrap() - gamma(9.0).unwrap()).abs() < 1e-14);
        // Continuous at both breakpoints.
        for i in [9.0, 9.0 * 8.0] {
            let lo = sum_capacity_no_relay(&p.with_inr2(i * (1.0 - 1e-12)).unwrap());
            let hi = sum_capacity_no_relay(&p.with_inr2(i * (1.0 + 1e-12)).unwrap());
            assert!((lo - hi).abs() < 1e-9);
        }
    }

    #[test]
    fn cf_without_link() {
        let p = ChannelParams::new(10.0, 20.0, 5.0, 0.0).unwrap();
        let cf = cf_rate_pair_type1(&p);
        assert_eq!(cf.wyner_ziv.delta0, 0.0);
        assert!(cf.wyner_ziv.sigma2_over_n.is_infinite());
        assert!((cf.r1 - gamma(10.0 / 6.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn asymptotic_gap_without_link_is_zero() {
        let p = fig5().with_r0(0.0).unwrap();
        for pt in asymptotic_sum_gain_type1(&p, 6, AsymptoticScheme::BetaStar).unwrap() {
            assert!(pt.gap.abs() < 1e-9, "{pt:?}");
        }
    }

    #[test]
    fn asymptotic_rejects_regime_change() {
        // The very-strong threshold grows quadratically with the scale, so
        // a violation shows up at the small scales first.
        let p = ChannelParams::new(2.0, 3.0, 2.9, 2.0).unwrap();
        let res = asymptotic_sum_gain_type1(&p, 8, AsymptoticScheme::BetaStar);
        assert_eq!(
            res,
            Err(Error::RegimeViolatedAtScale {
                scale: 1.0,
                label: RegimeLabel::VeryStrong
            })
        );
    }

    fn weak_params() -> impl Strategy<Value = ChannelParams> {
        (0.0f64..40.0, 0.0f64..40.0, 0.0f64..1.0, 0.0f64..3.0).prop_filter_map(
            "weak regime",
            |(s1, s2, frac, r0)| {
                let (s1, s2) = (crate::math::from_db(s1), crate::math::from_db(s2));
                let p = ChannelParams::new(s1, s2, frac * s2, r0).ok()?;
                (classify_type1(&p).label == RegimeLabel::Weak).then_some(p)
            },
        )
    }

    proptest! {
        #[test]
        fn df_dominates_cf(p in weak_params()) {
            let cf = cf_rate_pair_type1(&p);
            let r = region_type1(&p).unwrap();
            prop_assert!(r.region.contains_point([cf.r1, cf.r2], 1e-9), "{:?}", cf);
        }

        #[test]
        fn delta0_within_link_rate(p in weak_params()) {
            let d = cf_rate_pair_type1(&p).wyner_ziv.delta0;
            prop_assert!(d >= 0.0 && d <= p.r0() + 1e-12);
        }

        #[test]
        fn region_grows_with_link_rate(p in weak_params(), extra in 0.0f64..2.0) {
            let a = region_type1(&p).unwrap().region;
            let b = region_type1(&p.with_r0(p.r0() + extra).unwrap()).unwrap().region;
            prop_assert!(b.contains_region(&a, 1e-9));
        }

        #[test]
        fn very_strong_saturates(s1 in 0.0f64..30.0, s2 in 0.0f64..30.0, r0 in 0.0f64..3.0, extra in 0.0f64..3.0) {
            let p = ChannelParams::from_db(s1, s2, 0.0, r0).unwrap();
            let p = p.with_inr2(crate::math::inr2_star(&p) * 1.5 + 1.0).unwrap();
            let a = region_type1(&p).unwrap().region;
            let b = region_type1(&p.with_r0(r0 + extra).unwrap()).unwrap().region;
            prop_assert!(a.hausdorff(&b) < 1e-12);
        }
    }
}
