use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use zrelay_core::math::to_db;
use zrelay_core::type1::{corner_curve, region_type1_with};
use zrelay_core::type2::{region_type2_with, weak_curve};
use zrelay_core::verify::{self, Suite, VerifyConfig, VerifyReport};
use zrelay_core::{
    classify_type1, classify_type2, ChannelParams, Regime, RegimeLabel, RegionResult, SweepConfig,
};

use crate::args::{ChannelArgs, Format, GridArgs, Level, LinkKind, OutArgs, PresetName};
use crate::output::{curve_csv, region_csv, region_json, write_file, Target};
use crate::Failure;

fn classify(link: LinkKind, p: &ChannelParams) -> Regime {
    match link {
        LinkKind::One => classify_type1(p),
        LinkKind::Two => classify_type2(p),
    }
}

fn region(link: LinkKind, p: &ChannelParams, cfg: &SweepConfig) -> zrelay_core::Result<RegionResult> {
    match link {
        LinkKind::One => region_type1_with(p, cfg),
        LinkKind::Two => region_type2_with(p, cfg),
    }
}

fn link_number(link: LinkKind) -> u8 {
    match link {
        LinkKind::One => 1,
        LinkKind::Two => 2,
    }
}

/// Whether the region for this regime is the capacity region, and the
/// formula that gives it. `γ(x) = ½log₂(1+x)`.
fn governing_region(link: LinkKind, label: RegimeLabel) -> (&'static str, &'static str) {
    use RegimeLabel::*;
    match (link, label) {
        (LinkKind::One, Weak) => (
            "achievable",
            "union over 0 <= β <= 1 of R1 <= γ(SNR1/(1+β·INR2)), \
             R2 <= min(γ(SNR2), γ(β·SNR2) + γ((1-β)·INR2/(1+β·INR2)) + R0), \
             R1+R2 <= γ(β·SNR2) + γ((SNR1+(1-β)·INR2)/(1+β·INR2)) + R0",
        ),
        (LinkKind::One, Strong) => ("capacity", "R1 <= γ(SNR1), R2 <= γ(SNR2), R1+R2 <= γ(SNR1+INR2) + R0"),
        (LinkKind::One, _) => ("capacity", "R1 <= γ(SNR1), R2 <= γ(SNR2)"),
        (LinkKind::Two, Weak) => (
            "achievable",
            "boundary R1 = γ(SNR1/(1+β·INR2)), \
             R2 = γ(β·SNR2) + γ((1-β)·INR2/(1+SNR1+β·INR2)) + δ(β, R0) for 0 <= β <= 1, \
             δ(β, R0) = γ(β·INR2·(1-2^(-2R0)) / (1 + β·SNR2 + 2^(-2R0)·β·INR2))",
        ),
        (LinkKind::Two, ModeratelyStrong) => (
            "achievable",
            "convex hull of the quantize-and-bin pentagons over the power split β, \
             the quantization share r_a and the combining coefficient α",
        ),
        (LinkKind::Two, Strong) => ("capacity", "R1 <= γ(SNR1), R2 <= γ(SNR2) + R0, R1+R2 <= γ(SNR1+INR2)"),
        (LinkKind::Two, VeryStrong) => ("capacity", "R1 <= γ(SNR1), R2 <= γ(SNR2) + R0"),
    }
}

#[derive(Serialize)]
struct ThresholdReport {
    name: String,
    linear: f64,
    db: f64,
}

#[derive(Serialize)]
struct ClassifyReport {
    link_type: u8,
    regime: RegimeLabel,
    kind: &'static str,
    region: &'static str,
    snr1: f64,
    snr2: f64,
    inr2: f64,
    r0: f64,
    thresholds: Vec<ThresholdReport>,
}

fn fmt_db(x: f64) -> String {
    let d = to_db(x);
    if d.is_finite() {
        format!("{d:.3} dB")
    } else {
        format!("{d} dB")
    }
}

pub fn classify_cmd(channel: &ChannelArgs, json: bool) -> Result<String, Failure> {
    let p = channel.params()?;
    let regime = classify(channel.link, &p);
    let (kind, formula) = governing_region(channel.link, regime.label);
    let report = ClassifyReport {
        link_type: link_number(channel.link),
        regime: regime.label,
        kind,
        region: formula,
        snr1: p.snr1(),
        snr2: p.snr2(),
        inr2: p.inr2(),
        r0: p.r0(),
        thresholds: regime
            .thresholds
            .iter()
            .map(|(name, &v)| ThresholdReport {
                name: name.clone(),
                linear: v,
                db: to_db(v),
            })
            .collect(),
    };
    if json {
        return Ok(serde_json::to_string_pretty(&report).expect("report serializes") + "\n");
    }
    let mut out = format!("{}, region: {kind}, {formula}\n", regime.label);
    let _ = writeln!(out, "  INR2 = {} ({})", fmt_db(p.inr2()), p.inr2());
    for t in &report.thresholds {
        let _ = writeln!(out, "  {} = {} ({})", t.name, fmt_db(t.linear), t.linear);
    }
    Ok(out)
}

fn curve_points(link: LinkKind, p: &ChannelParams, n: usize) -> zrelay_core::Result<Vec<(f64, f64, f64)>> {
    let betas: Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
    let pts = match link {
        LinkKind::One => corner_curve(p, &betas)?,
        LinkKind::Two => weak_curve(p, &betas)?,
    };
    Ok(pts.iter().map(|c| (c.r1, c.r2, c.beta)).collect())
}

fn summary(r: &RegionResult) -> String {
    let (kind, _) = match r.regime.link {
        zrelay_core::math::LinkType::TypeI => governing_region(LinkKind::One, r.regime.label),
        zrelay_core::math::LinkType::TypeII => governing_region(LinkKind::Two, r.regime.label),
    };
    format!(
        "{} ({kind}): {} vertices, max R1 {:.6}, max R2 {:.6}, max sum rate {:.6} bits",
        r.regime.label,
        r.region.vertices().len(),
        r.region.max_r1(),
        r.region.max_r2(),
        r.region.max_sum_rate()
    )
}

/// Returns the text to print on stdout and, separately, notes for stderr.
pub fn region_cmd(
    channel: &ChannelArgs,
    grid: &GridArgs,
    out: &OutArgs,
    format: Format,
    curve: Option<&Path>,
) -> Result<(String, String), Failure> {
    let p = channel.params()?;
    let cfg = grid.config()?;
    let r = region(channel.link, &p, &cfg)?;
    let curve_rows = match curve {
        Some(_) => Some(curve_points(channel.link, &p, cfg.beta_points)?),
        None => None,
    };
    let target = Target::resolve(out.output.as_deref(), || {
        Some(out.out_dir.join(format!("region.{}", format.extension())))
    });
    let bytes = match format {
        Format::Json => region_json(&r.region),
        Format::Csv => region_csv(&r.region),
    };
    target.write(&bytes)?;
    let mut note = format!("{}\nregion written to {}\n", summary(&r), target.describe());
    if let (Some(path), Some(rows)) = (curve, curve_rows) {
        write_file(path, &curve_csv(&rows))?;
        let _ = writeln!(note, "curve written to {}", path.display());
    }
    // The summary goes to stdout unless stdout carries the region itself.
    Ok(match target {
        Target::Stdout => (String::new(), note),
        Target::File(_) => (note, String::new()),
    })
}

#[allow(clippy::too_many_arguments)]
pub fn sweep_cmd(
    link: LinkKind,
    snr1: Level,
    snr2: Level,
    inr2: Option<Level>,
    r0_min: f64,
    r0_max: f64,
    points: usize,
    linear: bool,
    output: Option<&Path>,
) -> Result<String, Failure> {
    if points < 2 {
        return Err(Failure::usage(format!("--points must be at least 2, got {points}")));
    }
    if !(r0_min >= 0.0 && r0_min <= r0_max && r0_max.is_finite()) {
        return Err(Failure::usage(format!("need 0 <= r0-min <= r0-max, got {r0_min} and {r0_max}")));
    }
    let base = ChannelParams::new(
        snr1.linear(linear),
        snr2.linear(linear),
        inr2.map_or(0.0, |l| l.linear(linear)),
        r0_min,
    )?;
    let rows: Vec<(f64, Regime)> = (0..points)
        .map(|k| {
            let r0 = r0_min + (r0_max - r0_min) * k as f64 / (points - 1) as f64;
            Ok((r0, classify(link, &base.with_r0(r0)?)))
        })
        .collect::<zrelay_core::Result<_>>()?;
    let names: Vec<String> = rows[0].1.thresholds.keys().cloned().collect();
    let mut header = vec!["r0_bits".to_string()];
    header.extend(names.iter().map(|n| format!("{}_db", n.to_ascii_lowercase())));
    if inr2.is_some() {
        header.push("regime".to_string());
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("in-memory write");
    for (r0, regime) in &rows {
        let mut rec = vec![r0.to_string()];
        rec.extend(names.iter().map(|n| to_db(regime.thresholds[n]).to_string()));
        if inr2.is_some() {
            rec.push(regime.label.to_string());
        }
        w.write_record(&rec).expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory flush");
    let target = Target::resolve(output, || None);
    target.write(&bytes)?;
    Ok(match target {
        Target::Stdout => String::new(),
        Target::File(p) => format!("{} rows written to {}\n", rows.len(), p.display()),
    })
}

struct Preset {
    link: LinkKind,
    db: [f64; 3],
    r0s: &'static [f64],
}

fn preset(name: PresetName) -> Preset {
    match name {
        PresetName::Type1Strong => Preset {
            link: LinkKind::One,
            db: [25.0, 25.0, 30.0],
            r0s: &[0.0, 2.0, 4.0],
        },
        PresetName::Type1Weak => Preset {
            link: LinkKind::One,
            db: [25.0, 25.0, 20.0],
            r0s: &[0.0, 1.0],
        },
        PresetName::Type2Strong => Preset {
            link: LinkKind::Two,
            db: [20.0, 20.0, 55.0],
            r0s: &[0.0, 2.0, 4.0],
        },
        PresetName::Type2Weak => Preset {
            link: LinkKind::Two,
            db: [20.0, 20.0, 15.0],
            r0s: &[0.0, 2.0],
        },
    }
}

pub fn preset_cmd(name: PresetName, out_dir: &Path, grid: &GridArgs) -> Result<String, Failure> {
    use clap::ValueEnum;
    let stem = name.to_possible_value().expect("presets are named").get_name().to_string();
    let cfg = grid.config()?;
    let pr = preset(name);
    let mut out = String::new();
    for &r0 in pr.r0s {
        let p = ChannelParams::from_db(pr.db[0], pr.db[1], pr.db[2], r0)?;
        let r = region(pr.link, &p, &cfg)?;
        let base: PathBuf = out_dir.join(format!("{stem}_r0_{r0}"));
        let json = base.with_extension("json");
        let csv = base.with_extension("csv");
        write_file(&json, &region_json(&r.region))?;
        write_file(&csv, &region_csv(&r.region))?;
        let _ = writeln!(out, "R0 = {r0}: {}", summary(&r));
        let _ = writeln!(out, "  {}\n  {}", json.display(), csv.display());
        if r.regime.label == RegimeLabel::Weak {
            let curve = out_dir.join(format!("{stem}_r0_{r0}_curve.csv"));
            write_file(&curve, &curve_csv(&curve_points(pr.link, &p, cfg.beta_points)?))?;
            let _ = writeln!(out, "  {}", curve.display());
        }
    }
    Ok(out)
}

pub fn parse_suites(s: &str) -> Result<Vec<Suite>, Failure> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(Suite::ALL.to_vec());
    }
    s.split(',')
        .map(|x| Suite::from_str(x.trim()).map_err(Failure::from))
        .collect()
}

fn verify_text(report: &VerifyReport) -> String {
    let mut out = format!("seed {}, {} draws\n", report.seed, report.draws);
    for s in &report.suites {
        for c in &s.checks {
            let _ = write!(
                out,
                "{} {}/{}: {} samples, {} failures, max error {:.3e} (tolerance {:.1e})",
                if c.passed { "PASS" } else { "FAIL" },
                s.suite,
                c.name,
                c.samples,
                c.failures,
                c.max_error,
                c.tolerance
            );
            match c.observed {
                Some(v) => {
                    let _ = writeln!(out, ", max value {v:.6}");
                }
                None => out.push('\n'),
            }
        }
    }
    out.push_str(if report.passed {
        "all checks passed\n"
    } else {
        "some checks failed\n"
    });
    out
}

/// Returns the report text and whether every check passed.
pub fn verify_cmd(seed: u64, draws: usize, suite: &str, json: bool) -> Result<(String, bool), Failure> {
    if draws == 0 {
        return Err(Failure::usage("--draws must be positive"));
    }
    let suites = parse_suites(suite)?;
    let report = verify::run(&suites, &VerifyConfig { seed, draws }).map_err(|e| Failure::Verify(e.to_string()))?;
    let text = if json {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    } else {
        verify_text(&report)
    };
    Ok((text, report.passed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse() {
        assert_eq!(parse_suites("all").unwrap().len(), Suite::ALL.len());
        assert_eq!(parse_suites("fm,halfbit").unwrap(), vec![Suite::Fm, Suite::HalfBit]);
        assert!(parse_suites("nope").is_err());
    }

    #[test]
    fn every_regime_has_a_formula() {
        for link in [LinkKind::One, LinkKind::Two] {
            for label in [
                RegimeLabel::Weak,
                RegimeLabel::ModeratelyStrong,
                RegimeLabel::Strong,
                RegimeLabel::VeryStrong,
            ] {
                let (kind, f) = governing_region(link, label);
                assert!(kind == "capacity" || kind == "achievable");
                assert!(f.contains("R2") || f.contains("hull"));
            }
        }
    }
}
