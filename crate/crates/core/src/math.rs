//! Scalar primitives shared by every region computation: the Gaussian
//! capacity function, dB conversion, the channel parameter container and the
//! regime classifiers for both link directions.

use std::collections::BTreeMap;
use std::f64::consts::LN_2;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub const SNR2: &str = "SNR2";
pub const INR2_STAR: &str = "INR2_star";
pub const INR2_DAGGER: &str = "INR2_dagger";
pub const INR2_DDAGGER: &str = "INR2_ddagger";
pub const INR2_SECTION: &str = "INR2_section";

/// `γ(x) = ½·log₂(1+x)`, the capacity of a real AWGN channel at SNR `x`.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!("gamma needs a finite x >= 0, got {x}")));
    }
    Ok(half_log2_1p(x))
}

/// Unchecked `γ`; callers guarantee `x >= 0`. `+∞` maps to `+∞`.
#[inline]
pub(crate) fn half_log2_1p(x: f64) -> f64 {
    0.5 * x.ln_1p() / LN_2
}

/// `2^{2r} - 1` without cancellation for small `r`.
#[inline]
pub(crate) fn exp2_2r_m1(r: f64) -> f64 {
    (2.0 * r * LN_2).exp_m1()
}

#[inline]
pub(crate) fn pow2_2r(r: f64) -> f64 {
    (2.0 * r * LN_2).exp()
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Physical description of the channel; the ratios in [`ChannelParams`]
/// derive from it as `SNR₁ = h₁₁²P₁/N`, `SNR₂ = h₂₂²P₂/N`, `INR₂ = h₂₁²P₂/N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalChannel {
    pub p1: f64,
    pub p2: f64,
    pub h11: f64,
    pub h22: f64,
    pub h21: f64,
    pub noise: f64,
}

/// Linear-scale channel description plus the relay link rate `R₀`
/// (bits per channel use).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelParams {
    snr1: f64,
    snr2: f64,
    inr2: f64,
    r0: f64,
}

fn check(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

impl ChannelParams {
    pub fn new(snr1: f64, snr2: f64, inr2: f64, r0: f64) -> Result<Self> {
        Ok(ChannelParams {
            snr1: check("snr1", snr1)?,
            snr2: check("snr2", snr2)?,
            inr2: check("inr2", inr2)?,
            r0: check("r0", r0)?,
        })
    }

    /// SNRs and INR in dB, `r0` in bits.
    pub fn from_db(snr1_db: f64, snr2_db: f64, inr2_db: f64, r0: f64) -> Result<Self> {
        Self::new(from_db(snr1_db), from_db(snr2_db), from_db(inr2_db), r0)
    }

    pub fn from_physical(ch: &PhysicalChannel, r0: f64) -> Result<Self> {
        let noise = ch.noise;
        if !(noise.is_finite() && noise > 0.0) {
            return Err(Error::InvalidParameter {
                name: "noise",
                value: noise,
            });
        }
        check("p1", ch.p1)?;
        check("p2", ch.p2)?;
        Self::new(
            ch.h11 * ch.h11 * ch.p1 / noise,
            ch.h22 * ch.h22 * ch.p2 / noise,
            ch.h21 * ch.h21 * ch.p2 / noise,
            r0,
        )
    }

    pub fn snr1(&self) -> f64 {
        self.snr1
    }
    pub fn snr2(&self) -> f64 {
        self.snr2
    }
    pub fn inr2(&self) -> f64 {
        self.inr2
    }
    pub fn r0(&self) -> f64 {
        self.r0
    }

    /// `(SNR₁, SNR₂, INR₂)` in dB.
    pub fn to_db(&self) -> (f64, f64, f64) {
        (to_db(self.snr1), to_db(self.snr2), to_db(self.inr2))
    }

    pub fn with_r0(&self, r0: f64) -> Result<Self> {
        Self::new(self.snr1, self.snr2, self.inr2, r0)
    }

    pub fn with_inr2(&self, inr2: f64) -> Result<Self> {
        Self::new(self.snr1, self.snr2, inr2, self.r0)
    }

    /// Multiplies SNR₁, SNR₂ and INR₂ by a common factor (noise power
    /// divided by `factor`), keeping `R₀`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::domain(format!("scale factor must be positive, got {factor}")));
        }
        Self::new(
            self.snr1 * factor,
            self.snr2 * factor,
            self.inr2 * factor,
            self.r0,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RegimeLabel {
    Weak,
    ModeratelyStrong,
    Strong,
    VeryStrong,
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegimeLabel::Weak => "Weak",
            RegimeLabel::ModeratelyStrong => "ModeratelyStrong",
            RegimeLabel::Strong => "Strong",
            RegimeLabel::VeryStrong => "VeryStrong",
        };
        f.write_str(s)
    }
}

/// Which link direction a regime was computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LinkType {
    /// Link from the interference-free receiver to the interfered receiver.
    TypeI,
    /// Link from the interfered receiver to the interference-free receiver.
    TypeII,
}

/// A regime label together with the thresholds (linear scale) and the
/// `INR₂` that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Regime {
    pub label: RegimeLabel,
    pub link: LinkType,
    pub inr2: f64,
    pub thresholds: BTreeMap<String, f64>,
}

impl Regime {
    pub fn threshold(&self, name: &str) -> Option<f64> {
        self.thresholds.get(name).copied()
    }

    /// Re-derives the label from the stored thresholds and `INR₂`.
    pub fn rederive(&self) -> RegimeLabel {
        let t = |n| self.thresholds[n];
        match self.link {
            LinkType::TypeI => label_type1(self.inr2, t(SNR2), t(INR2_STAR)),
            LinkType::TypeII => label_type2(self.inr2, t(SNR2), t(INR2_DAGGER), t(INR2_DDAGGER)),
        }
    }
}

/// `INR₂* = ((1+SNR₁)(2^{-2R₀}(1+SNR₂) - 1))⁺`, the Type I very-strong boundary.
pub fn inr2_star(p: &ChannelParams) -> f64 {
    let v = (1.0 + p.snr1) * ((-2.0 * p.r0 * LN_2).exp() * (1.0 + p.snr2) - 1.0);
    v.max(0.0)
}

/// `INR₂† = 2^{2R₀}(1+SNR₂) - 1`, the Type II strong boundary.
pub fn inr2_dagger(p: &ChannelParams) -> f64 {
    pow2_2r(p.r0) * (1.0 + p.snr2) - 1.0
}

/// `INR₂‡ = (1+SNR₁)·INR₂†`, the Type II very-strong boundary.
pub fn inr2_ddagger(p: &ChannelParams) -> f64 {
    (1.0 + p.snr1) * inr2_dagger(p)
}

/// `INR₂§ = SNR₂(1+SNR₁)`, below which the infinite-relay sum-capacity gain
/// of the Type II channel is at most half a bit. (The threshold is sometimes
/// printed with an `SINR₁`; it only makes sense with `SNR₁`, the classical
/// very-strong boundary of the Z-channel.)
pub fn inr2_section(p: &ChannelParams) -> f64 {
    p.snr2 * (1.0 + p.snr1)
}

fn label_type1(inr2: f64, snr2: f64, star: f64) -> RegimeLabel {
    if inr2 >= star {
        RegimeLabel::VeryStrong
    } else if inr2 >= snr2 {
        RegimeLabel::Strong
    } else {
        RegimeLabel::Weak
    }
}

fn label_type2(inr2: f64, snr2: f64, dagger: f64, ddagger: f64) -> RegimeLabel {
    if inr2 >= ddagger {
        RegimeLabel::VeryStrong
    } else if inr2 >= dagger {
        RegimeLabel::Strong
    } else if inr2 >= snr2 {
        RegimeLabel::ModeratelyStrong
    } else {
        RegimeLabel::Weak
    }
}

/// Type I regimes: weak for `INR₂ < min{SNR₂, INR₂*}`, very strong for
/// `INR₂ >= INR₂*`, strong otherwise. Ties go to the stronger regime.
pub fn classify_type1(p: &ChannelParams) -> Regime {
    let star = inr2_star(p);
    let thresholds = BTreeMap::from([(SNR2.to_string(), p.snr2), (INR2_STAR.to_string(), star)]);
    Regime {
        label: label_type1(p.inr2, p.snr2, star),
        link: LinkType::TypeI,
        inr2: p.inr2,
        thresholds,
    }
}

/// Type II regimes, split at `SNR₂ <= INR₂† <= INR₂‡`. Ties go to the
/// stronger regime.
pub fn classify_type2(p: &ChannelParams) -> Regime {
    let dagger = inr2_dagger(p);
    let ddagger = inr2_ddagger(p);
    let thresholds = BTreeMap::from([
        (SNR2.to_string(), p.snr2),
        (INR2_DAGGER.to_string(), dagger),
        (INR2_DDAGGER.to_string(), ddagger),
        (INR2_SECTION.to_string(), inr2_section(p)),
    ]);
    Regime {
        label: label_type2(p.inr2, p.snr2, dagger, ddagger),
        link: LinkType::TypeII,
        inr2: p.inr2,
        thresholds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(0.0).unwrap(), 0.0);
        assert!((gamma(3.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((gamma(1316.2278).unwrap() - 5.1822).abs() < 1e-3);
    }

    #[test]
    fn gamma_rejects_bad_input() {
        assert!(gamma(-1e-9).is_err());
        assert!(gamma(f64::NAN).is_err());
        assert!(gamma(f64::INFINITY).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(ChannelParams::new(1.0, 1.0, -1.0, 0.0).is_err());
        assert!(ChannelParams::new(1.0, f64::INFINITY, 1.0, 0.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, 1.0, f64::NAN).is_err());
        let ch = PhysicalChannel {
            p1: 2.0,
            p2: 3.0,
            h11: 1.0,
            h22: 2.0,
            h21: 0.5,
            noise: 0.5,
        };
        let p = ChannelParams::from_physical(&ch, 1.0).unwrap();
        assert_eq!((p.snr1(), p.snr2(), p.inr2()), (4.0, 24.0, 1.5));
        let zero_noise = PhysicalChannel { noise: 0.0, ..ch };
        assert!(ChannelParams::from_physical(&zero_noise, 1.0).is_err());
    }

    #[test]
    fn type1_regimes_of_strong_example() {
        let p = ChannelParams::from_db(25.0, 25.0, 30.0, 2.0).unwrap();
        assert_eq!(classify_type1(&p).label, RegimeLabel::Strong);
        let p = p.with_r0(4.0).unwrap();
        assert_eq!(classify_type1(&p).label, RegimeLabel::VeryStrong);
    }

    #[test]
    fn type2_regimes_of_strong_example() {
        let p = ChannelParams::from_db(20.0, 20.0, 55.0, 2.0).unwrap();
        assert_eq!(classify_type2(&p).label, RegimeLabel::VeryStrong);
        let p = p.with_r0(4.0).unwrap();
        assert_eq!(classify_type2(&p).label, RegimeLabel::Strong);
    }

    #[test]
    fn zero_relay_thresholds_reduce_to_classical() {
        let p = ChannelParams::new(7.0, 13.0, 5.0, 0.0).unwrap();
        assert!((inr2_star(&p) - 13.0 * 8.0).abs() < 1e-12);
        assert!((inr2_dagger(&p) - 13.0).abs() < 1e-12);
        for inr in [0.0, 5.0, 12.999, 13.0, 50.0, 103.999, 104.0, 1e4] {
            let q = p.with_inr2(inr).unwrap();
            let l1 = classify_type1(&q).label;
            let l2 = classify_type2(&q).label;
            let classical = if inr < 13.0 {
                RegimeLabel::Weak
            } else if inr < 104.0 {
                RegimeLabel::Strong
            } else {
                RegimeLabel::VeryStrong
            };
            assert_eq!(l1, classical, "type1 at {inr}");
            assert_eq!(l2, classical, "type2 at {inr}");
        }
    }

    #[test]
    fn boundary_ties_go_to_stronger_regime() {
        let p = ChannelParams::new(10.0, 10.0, 0.0, 1.0).unwrap();
        let dagger = inr2_dagger(&p);
        let q = p.with_inr2(dagger).unwrap();
        assert_eq!(classify_type2(&q).label, RegimeLabel::Strong);
        let q = p.with_inr2(10.0).unwrap();
        assert_eq!(classify_type2(&q).label, RegimeLabel::ModeratelyStrong);
        let star = inr2_star(&p);
        let q = p.with_inr2(star).unwrap();
        assert_eq!(classify_type1(&q).label, RegimeLabel::VeryStrong);
    }

    #[test]
    fn zero_interference_is_weak() {
        let p = ChannelParams::from_db(25.0, 25.0, 0.0, 2.0)
            .unwrap()
            .with_inr2(0.0)
            .unwrap();
        assert_eq!(classify_type1(&p).label, RegimeLabel::Weak);
        assert_eq!(classify_type2(&p).label, RegimeLabel::Weak);
    }

    proptest! {
        #[test]
        fn db_round_trip(x in 1e-12f64..1e12) {
            let back = from_db(to_db(x));
            prop_assert!(((back - x) / x).abs() <= 1e-12);
        }

        #[test]
        fn gamma_monotone_and_concave(x in 0.0f64..1e6, d in 0.0f64..1e6) {
            let y = x + d;
            let gx = gamma(x).unwrap();
            let gy = gamma(y).unwrap();
            prop_assert!(gx <= gy);
            prop_assert!(gamma((x + y) / 2.0).unwrap() >= (gx + gy) / 2.0 - 1e-12);
        }

        #[test]
        fn ddagger_dominates_dagger(s1 in 0.0f64..1e5, s2 in 0.0f64..1e5, r0 in 0.0f64..8.0) {
            let p = ChannelParams::new(s1, s2, 1.0, r0).unwrap();
            prop_assert!(inr2_ddagger(&p) >= inr2_dagger(&p));
        }

        #[test]
        fn labels_monotone_in_inr2(
            s1 in -10.0f64..40.0, s2 in -10.0f64..40.0, r0 in 0.0f64..6.0,
            a in -20.0f64..70.0, b in -20.0f64..70.0,
        ) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let p = ChannelParams::from_db(s1, s2, lo, r0).unwrap();
            let q = ChannelParams::from_db(s1, s2, hi, r0).unwrap();
            prop_assert!(classify_type1(&p).label <= classify_type1(&q).label);
            prop_assert!(classify_type2(&p).label <= classify_type2(&q).label);
            prop_assert_eq!(classify_type1(&p).rederive(), classify_type1(&p).label);
            prop_assert_eq!(classify_type2(&q).rederive(), classify_type2(&q).label);
        }
    }
}
