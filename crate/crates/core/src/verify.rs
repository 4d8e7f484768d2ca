//! Seeded, deterministic cross-check suites. Each suite compares a closed
//! form against an independent route (log-det oracle, Fourier-Motzkin
//! projection, grid search, sampled geometry) on random parameter draws.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{check_boundary_concavity, LinearSystem, RateRegion, DEFAULT_CONCAVITY_TOL};
use crate::math::{
    classify_type1, classify_type2, from_db, gamma, inr2_dagger, inr2_ddagger, inr2_section, inr2_star,
    ChannelParams, RegimeLabel,
};
use crate::oracle::models;
use crate::type1::{
    asymptotic_sum_gain_type1, beta_star, beta_star_noise_free_limit, cf_rate_pair_type1, corner_curve,
    pentagon_weak, region_type1, AsymptoticScheme, PowerSplit,
};
use crate::type2::{
    alpha_star, delta_weak, pentagon_type2, quantizer_stats_raw, region_type2_with, weak_curve, Type2Scheme,
};
use crate::{linspace, SweepConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Oracle,
    Convexity,
    Fm,
    HalfBit,
    Asymptotic,
    Alpha,
    Continuity,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Oracle,
        Suite::Convexity,
        Suite::Fm,
        Suite::HalfBit,
        Suite::Asymptotic,
        Suite::Alpha,
        Suite::Continuity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Convexity => "convexity",
            Suite::Fm => "fm",
            Suite::HalfBit => "halfbit",
            Suite::Asymptotic => "asymptotic",
            Suite::Alpha => "alpha",
            Suite::Continuity => "continuity",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random draws per check (the half-bit suite uses 100 times as many).
    pub draws: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 0, draws: 100 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub samples: usize,
    pub failures: usize,
    /// Largest deviation seen (bits unless stated in the check name).
    pub max_error: f64,
    pub tolerance: f64,
    /// Largest checked value, for checks of the form `value <= bound`.
    pub observed: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub draws: usize,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

/// Accumulates deviations for one named check.
struct Check {
    name: String,
    tolerance: f64,
    samples: usize,
    failures: usize,
    max_error: f64,
    observed: Option<f64>,
}

impl Check {
    fn new(name: &str, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            tolerance,
            samples: 0,
            failures: 0,
            max_error: 0.0,
            observed: None,
        }
    }

    fn error(&mut self, e: f64) {
        self.samples += 1;
        let e = if e.is_nan() { f64::INFINITY } else { e.abs() };
        if e > self.tolerance {
            self.failures += 1;
        }
        self.max_error = self.max_error.max(e);
    }

    /// Records `value <= bound`; the error is the excess.
    fn at_most(&mut self, value: f64, bound: f64) {
        self.samples += 1;
        let excess = if value.is_nan() { f64::INFINITY } else { value - bound };
        if excess > self.tolerance {
            self.failures += 1;
        }
        self.max_error = self.max_error.max(excess.max(0.0));
        self.observed = Some(self.observed.map_or(value, |o| o.max(value)));
    }

    fn flag(&mut self, ok: bool) {
        self.samples += 1;
        if !ok {
            self.failures += 1;
            self.max_error = f64::INFINITY;
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            passed: self.failures == 0 && self.samples > 0,
            name: self.name,
            samples: self.samples,
            failures: self.failures,
            max_error: self.max_error,
            tolerance: self.tolerance,
            observed: self.observed,
        }
    }
}

fn rng_for(cfg: &VerifyConfig, suite: Suite) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ ((suite as u64 + 1) << 56))
}

/// SNRs uniform in dB over `[0, 30]`, `INR₂` uniform in dB over
/// `[-10, 40]`, `R₀` uniform in `[0.05, 3]`.
pub fn random_params(rng: &mut impl Rng) -> ChannelParams {
    ChannelParams::from_db(
        rng.gen_range(0.0..30.0),
        rng.gen_range(0.0..30.0),
        rng.gen_range(-10.0..40.0),
        rng.gen_range(0.05..3.0),
    )
    .expect("sampled parameters are valid")
}

/// Weak-regime draw for the given link direction.
pub fn random_weak_params(rng: &mut impl Rng, type2: bool) -> ChannelParams {
    loop {
        let s1 = from_db(rng.gen_range(0.0..30.0));
        let s2 = from_db(rng.gen_range(0.0..30.0));
        let i = rng.gen_range(0.0..1.0) * s2;
        let r0 = rng.gen_range(0.05..3.0);
        let p = ChannelParams::new(s1, s2, i, r0).expect("valid");
        let label = if type2 {
            classify_type2(&p).label
        } else {
            classify_type1(&p).label
        };
        if label == RegimeLabel::Weak {
            return p;
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut rng = rng_for(cfg, suite);
    let checks = match suite {
        Suite::Oracle => oracle_suite(&mut rng, cfg.draws)?,
        Suite::Convexity => convexity_suite(&mut rng, cfg.draws)?,
        Suite::Fm => fm_suite(&mut rng, cfg.draws)?,
        Suite::HalfBit => half_bit_suite(&mut rng, cfg.draws.saturating_mul(100))?,
        Suite::Asymptotic => asymptotic_suite(&mut rng, cfg.draws)?,
        Suite::Alpha => alpha_suite(&mut rng, cfg.draws)?,
        Suite::Continuity => continuity_suite(&mut rng, cfg.draws)?,
    };
    let checks: Vec<CheckResult> = checks.into_iter().map(Check::finish).collect();
    Ok(SuiteReport {
        suite,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

pub fn run(suites: &[Suite], cfg: &VerifyConfig) -> Result<VerifyReport> {
    let reports = suites
        .iter()
        .map(|&s| run_suite(s, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport {
        seed: cfg.seed,
        draws: cfg.draws,
        passed: reports.iter().all(|r| r.passed),
        suites: reports,
    })
}

fn oracle_suite(rng: &mut ChaCha8Rng, draws: usize) -> Result<Vec<Check>> {
    let mut cf_r1 = Check::new("type1 compress-forward R1 vs I(X1;Y1,Y2hat)", 1e-9);
    let mut cf_budget = Check::new("type1 quantizer spends the link: I(Y2hat;Y2|Y1) = R0", 1e-9);
    let mut c1 = Check::new("type1 interfered-receiver MAC bounds vs oracle", 1e-9);
    let mut c2 = Check::new("interference-free MAC bounds vs oracle", 1e-9);
    let mut zeta = Check::new("type2 zeta vs I(U2;Y1hat|Y2,W2)", 1e-9);
    let mut eta = Check::new("type2 eta vs I(U2,W2;Y1hat|Y2)", 1e-9);
    let mut budget = Check::new("type2 quantizer spends r_a: I(Y1hat;Y1bar|Y2) = r_a", 1e-9);
    for _ in 0..draws {
        let p = random_params(rng);
        let (s1, s2, i, r0) = (p.snr1(), p.snr2(), p.inr2(), p.r0());

        let cf = cf_rate_pair_type1(&p);
        let sys = models::type1_compress_forward(&p, cf.wyner_ziv.sigma2_over_n)?;
        cf_r1.error(cf.r1 - sys.mutual_information(&["X1"], &["Y1", "Y2hat"], &[])?);
        cf_budget.error(r0 - sys.mutual_information(&["Y2hat"], &["Y2"], &["Y1"])?);

        let beta: f64 = rng.gen_range(0.0..1.0);
        let bb = 1.0 - beta;
        let z = models::z_channel(&p, beta)?;
        c1.error(gamma(s1 / (1.0 + beta * i))? - z.mutual_information(&["X1"], &["Y1"], &["W2"])?);
        c1.error(gamma(bb * i / (1.0 + beta * i))? - z.mutual_information(&["W2"], &["Y1"], &["X1"])?);
        c1.error(
            gamma((s1 + bb * i) / (1.0 + beta * i))? - z.mutual_information(&["X1", "W2"], &["Y1"], &[])?,
        );
        c2.error(gamma(beta * s2)? - z.mutual_information(&["U2"], &["Y2"], &["W2"])?);
        c2.error(gamma(bb * s2)? - z.mutual_information(&["W2"], &["Y2"], &["U2"])?);
        c2.error(gamma(s2)? - z.mutual_information(&["U2", "W2"], &["Y2"], &[])?);

        let alpha: f64 = rng.gen_range(-3.0..1.0);
        let ra: f64 = rng.gen_range(0.05..3.0);
        let q = quantizer_stats_raw(&p, alpha, beta, ra)?;
        let sys = models::type2_relay(&p, beta, alpha, q.sigma2_over_n)?;
        zeta.error(q.zeta - sys.mutual_information(&["U2"], &["Y1hat"], &["Y2", "W2"])?);
        eta.error(q.eta - sys.mutual_information(&["U2", "W2"], &["Y1hat"], &["Y2"])?);
        budget.error(ra - sys.mutual_information(&["Y1hat"], &["Y1bar"], &["Y2"])?);
    }
    Ok(vec![cf_r1, cf_budget, c1, c2, zeta, eta, budget])
}

/// Curve checks on 200-point power-split grids over `[0, 1]`, ordered by
/// increasing `R₁` (decreasing `β`).
fn convexity_suite(rng: &mut ChaCha8Rng, draws: usize) -> Result<Vec<Check>> {
    let betas = linspace(1.0, 0.0, 200);
    let mut t1_mono = Check::new("type1 corner curve non-increasing", 0.0);
    let mut t1_conc = Check::new("type1 corner curve concave", 0.0);
    let mut t2_mono = Check::new("type2 weak curve non-increasing", 0.0);
    let mut t2_conc = Check::new("type2 weak curve concave", 0.0);
    for _ in 0..draws {
        let p = random_weak_params(rng, false);
        let pts: Vec<[f64; 2]> = corner_curve(&p, &betas)?.iter().map(|c| [c.r1, c.r2]).collect();
        let r = check_boundary_concavity(&dedup_abscissae(pts), DEFAULT_CONCAVITY_TOL)?;
        t1_mono.flag(r.monotone_ok);
        t1_conc.flag(r.concave_ok);

        let p = random_weak_params(rng, true);
        let pts: Vec<[f64; 2]> = weak_curve(&p, &betas)?.iter().map(|c| [c.r1, c.r2]).collect();
        let r = check_boundary_concavity(&dedup_abscissae(pts), DEFAULT_CONCAVITY_TOL)?;
        t2_mono.flag(r.monotone_ok);
        t2_conc.flag(r.concave_ok);
    }
    Ok(vec![t1_mono, t1_conc, t2_mono, t2_conc])
}

/// Drops samples whose `R₁` does not strictly increase (a flat curve when
/// the interference vanishes).
fn dedup_abscissae(pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    for p in pts {
        if out.last().is_none_or(|q| p[0] > q[0]) {
            out.push(p);
        }
    }
    out
}

/// Joint rate system: `R₁ = S₁`, `R₂ = S₂ + T₂`, `(S₁, T₂)` in the
/// interfered receiver's MAC region and `(S₂, T₂)` in the other one.
pub fn split_rate_system(c1: [f64; 3], c2: [f64; 3]) -> Result<LinearSystem> {
    let mut s = LinearSystem::new(&["R1", "R2", "S1", "S2", "T2"])?;
    s.add_eq(&[("R1", 1.0), ("S1", -1.0)], 0.0)?
        .add_eq(&[("R2", 1.0), ("S2", -1.0), ("T2", -1.0)], 0.0)?
        .add_nonnegative(&["S1", "S2", "T2"])?
        .add_le(&[("S1", 1.0)], c1[0])?
        .add_le(&[("T2", 1.0)], c1[1])?
        .add_le(&[("S1", 1.0), ("T2", 1.0)], c1[2])?
        .add_le(&[("S2", 1.0)], c2[0])?
        .add_le(&[("T2", 1.0)], c2[1])?
        .add_le(&[("S2", 1.0), ("T2", 1.0)], c2[2])?;
    Ok(s)
}

fn fm_suite(rng: &mut ChaCha8Rng, draws: usize) -> Result<Vec<Check>> {
    let mut t1 = Check::new("type1 projection equals per-split pentagon", 1e-9);
    let mut t2 = Check::new("type2 projection equals per-scheme pentagon", 1e-9);
    for _ in 0..draws {
        let p = random_params(rng);
        let (s1, s2, i, r0) = (p.snr1(), p.snr2(), p.inr2(), p.r0());
        let beta: f64 = rng.gen_range(0.0..1.0);
        let bb = 1.0 - beta;
        let mac1 = |link: f64| -> Result<[f64; 3]> {
            Ok([
                gamma(s1 / (1.0 + beta * i))?,
                gamma(bb * i / (1.0 + beta * i))? + link,
                gamma((s1 + bb * i) / (1.0 + beta * i))? + link,
            ])
        };

        let sys = split_rate_system(mac1(r0)?, [gamma(beta * s2)?, gamma(bb * s2)?, gamma(s2)?])?;
        let projected = sys.project(["R1", "R2"])?;
        let closed = pentagon_weak(&p, PowerSplit::new(beta)?).to_region();
        t1.error(projected.hausdorff(&closed));

        let alpha: f64 = rng.gen_range(-3.0..1.0);
        let ra: f64 = rng.gen_range(0.0..r0);
        let scheme = Type2Scheme::saturated(&p, alpha, beta, ra)?;
        let q = quantizer_stats_raw(&p, alpha, beta, ra)?;
        let sys2 = models::type2_relay(&p, beta, alpha, q.sigma2_over_n)?;
        let xi = sys2.mutual_information(&["W2"], &["Y1hat"], &["Y2", "U2"])?;
        let c2 = [
            gamma(beta * s2)? + q.zeta,
            gamma(bb * s2)? + xi + scheme.rb(),
            gamma(s2)? + q.eta + scheme.rb(),
        ];
        let projected = split_rate_system(mac1(0.0)?, c2)?.project(["R1", "R2"])?;
        let closed = pentagon_type2(&p, &scheme)?.to_region();
        t2.error(projected.hausdorff(&closed));
    }
    Ok(vec![t1, t2])
}

fn half_bit_suite(rng: &mut ChaCha8Rng, draws: usize) -> Result<Vec<Check>> {
    use crate::type2::sum_capacity_infinite_relay;
    let mut bound = Check::new("infinite-link gain at most half a bit below the threshold", 1e-12);
    let mut unbounded = Check::new("gain exceeds two bits far above the threshold", 0.0);
    for _ in 0..draws {
        let s1 = from_db(rng.gen_range(-10.0..50.0));
        let s2 = from_db(rng.gen_range(-10.0..50.0));
        let p = ChannelParams::new(s1, s2, 0.0, 0.0)?;
        let p = p.with_inr2(rng.gen_range(0.0..=1.0) * inr2_section(&p))?;
        bound.at_most(sum_capacity_infinite_relay(&p).gain, 0.5);
    }
    let (s1, s2) = (100.0, 100.0);
    let p = ChannelParams::new(s1, s2, 1e6 * s1 * s2, 0.0)?;
    unbounded.flag(sum_capacity_infinite_relay(&p).gain > 2.0);
    Ok(vec![bound, unbounded])
}

/// `|gap|` must shrink at every step and end below 0.02 bits.
fn converges(points: &[crate::type1::AsymptoticPoint]) -> bool {
    let mono = points.windows(2).all(|w| w[1].gap.abs() <= w[0].gap.abs() + 1e-12);
    mono && points.last().is_some_and(|p| p.gap.abs() < 0.02)
}

fn asymptotic_suite(rng: &mut ChaCha8Rng, draws: usize) -> Result<Vec<Check>> {
    let mut star = Check::new("sum rate at beta* approaches C_sum(0) + R0", 0.0);
    let mut fixed = Check::new("sum rate at a fixed split approaches C_sum(0) + R0", 0.0);
    let mut cf = Check::new("compress-forward sum rate approaches C_sum(0) + R0", 0.0);
    let mut params = vec![ChannelParams::from_db(25.0, 25.0, 20.0, 1.0)?];
    params.extend((0..draws / 10).map(|_| random_weak_params(rng, false)));
    for p in params {
        star.flag(converges(&asymptotic_sum_gain_type1(&p, 8, AsymptoticScheme::BetaStar)?));
        let b = 0.5 * beta_star(&p)?.split.beta().min(beta_star_noise_free_limit(&p));
        fixed.flag(converges(&asymptotic_sum_gain_type1(&p, 8, AsymptoticScheme::FixedBeta(b))?));
        cf.flag(converges(&asymptotic_sum_gain_type1(&p, 8, AsymptoticScheme::CompressForward)?));
    }
    Ok(vec![star, fixed, cf])
}

/// Grid step for the coefficient search.
const ALPHA_STEP: f64 = 1e-4;

fn alpha_suite(rng: &mut ChaCha8Rng, draws: usize) -> Result<Vec<Check>> {
    let mut argmin = Check::new("grid minimizer of quantization noise is alpha* (coefficient units)", ALPHA_STEP);
    let mut minimum = Check::new("no grid point beats alpha* (relative noise)", 1e-12);
    let mut delta = Check::new("zeta at alpha* equals delta", 1e-9);
    let n = ((1.0 - -3.0) / ALPHA_STEP).round() as usize;
    for _ in 0..draws {
        let p = random_params(rng);
        let beta: f64 = rng.gen_range(0.0..0.99);
        let r0 = p.r0();
        let sigma = |a: f64| quantizer_stats_raw(&p, a, beta, r0).map(|q| q.sigma2_over_n);
        let (mut best_a, mut best) = (f64::NAN, f64::INFINITY);
        for k in 0..=n {
            let a = -3.0 + k as f64 * ALPHA_STEP;
            let v = sigma(a)?;
            if v < best {
                best = v;
                best_a = a;
            }
        }
        let a_star = alpha_star(&p, beta);
        argmin.error(best_a - a_star);
        minimum.at_most((sigma(a_star)? - best) / best, 0.0);
        let z = quantizer_stats_raw(&p, a_star, beta, r0)?.zeta;
        delta.error(z - delta_weak(&p, beta)?);
    }
    Ok(vec![argmin, minimum, delta])
}

/// Relative offset used to step across a threshold.
const STEP: f64 = 1e-9;

fn straddle(p: &ChannelParams, t: f64, f: impl Fn(&ChannelParams) -> Result<RateRegion>) -> Result<f64> {
    let lo = f(&p.with_inr2(t * (1.0 - STEP))?)?;
    let hi = f(&p.with_inr2(t * (1.0 + STEP))?)?;
    Ok(lo.hausdorff(&hi))
}

fn continuity_suite(rng: &mut ChaCha8Rng, draws: usize) -> Result<Vec<Check>> {
    let mut t1_weak = Check::new("type1 weak to very strong at INR2*", 1e-6);
    let mut t1_strong = Check::new("type1 strong to very strong at INR2*", 1e-6);
    let mut t2_dagger = Check::new("type2 moderately strong to strong at INR2 dagger", 1e-6);
    let mut t2_ddagger = Check::new("type2 strong to very strong at INR2 double dagger", 1e-6);
    let type1 = |q: &ChannelParams| region_type1(q).map(|r| r.region);
    let type2 = |q: &ChannelParams| region_type2_with(q, &SweepConfig::default()).map(|r| r.region);
    for _ in 0..draws {
        let p = random_params(rng);
        let s2 = p.snr2();
        // Link rates that put INR2* below and above SNR2.
        let r_max = 0.5 * (1.0 + s2).log2();
        let r_weak = rng.gen_range(0.05..0.95) * r_max;
        let q = p.with_r0(r_weak)?;
        let t = inr2_star(&q);
        if t < s2 {
            t1_weak.error(straddle(&q, t, type1)?);
        } else {
            t1_strong.error(straddle(&q, t, type1)?);
        }
        let q = p.with_r0(rng.gen_range(0.0..0.3) * r_max)?;
        let t = inr2_star(&q);
        if t > s2 {
            t1_strong.error(straddle(&q, t, type1)?);
        } else {
            t1_weak.error(straddle(&q, t, type1)?);
        }

        t2_dagger.error(straddle(&p, inr2_dagger(&p), type2)?);
        t2_ddagger.error(straddle(&p, inr2_ddagger(&p), type2)?);
    }
    Ok(vec![t1_weak, t1_strong, t2_dagger, t2_ddagger])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn deterministic_for_a_seed() {
        let cfg = VerifyConfig { seed: 7, draws: 3 };
        let a = run(&[Suite::Oracle, Suite::Fm], &cfg).unwrap();
        let b = run(&[Suite::Oracle, Suite::Fm], &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.passed, "{a:#?}");
    }

    #[test]
    fn check_accounting() {
        let mut c = Check::new("x", 0.1);
        c.error(0.05);
        c.error(-0.2);
        c.at_most(1.0, 1.05);
        let r = c.finish();
        assert_eq!((r.samples, r.failures), (3, 1));
        assert!(!r.passed && (r.max_error - 0.2).abs() < 1e-15);
    }
}
