use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zrelay_core::math::from_db;
use zrelay_core::{ChannelParams, SweepConfig};

#[derive(Debug, Parser)]
#[command(
    name = "zrelay",
    version,
    about = "Rate regions of the Gaussian Z-interference channel with a one-way digital relay link"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the regime, its thresholds, and the formula that gives the region.
    Classify {
        #[command(flatten)]
        channel: ChannelArgs,
        /// Emit a JSON report instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Compute a region and write its vertices and half-planes.
    Region {
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Also write the weak-regime boundary curve as `r1_bits,r2_bits,beta`.
        #[arg(long, value_name = "PATH")]
        curve: Option<PathBuf>,
    },
    /// Tabulate regime thresholds against the link rate, as CSV.
    Sweep {
        #[arg(long = "type", value_parser = parse_link)]
        link: LinkKind,
        #[arg(long, allow_hyphen_values = true)]
        snr1: Level,
        #[arg(long, allow_hyphen_values = true)]
        snr2: Level,
        /// When given, a `regime` column labels this interference level.
        #[arg(long, allow_hyphen_values = true)]
        inr2: Option<Level>,
        #[arg(long, default_value_t = 0.0)]
        r0_min: f64,
        #[arg(long, default_value_t = 4.0)]
        r0_max: f64,
        #[arg(long, default_value_t = 41)]
        points: usize,
        #[arg(long)]
        linear: bool,
        /// Output file; `-` or absent writes to stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Regions for a named setting at several link rates, written as JSON and CSV.
    Preset {
        #[arg(value_enum)]
        name: PresetName,
        #[arg(long, env = "ZRELAY_OUT_DIR", default_value = ".")]
        out_dir: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Run the randomized cross-check suites.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random draws per check; the half-bit suite uses 100 times as many.
        #[arg(long, default_value_t = 100)]
        draws: usize,
        /// `all` or one of oracle, convexity, fm, halfbit, asymptotic, alpha, continuity.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Emit the full JSON report instead of a summary.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkKind {
    One,
    Two,
}

fn parse_link(s: &str) -> Result<LinkKind, String> {
    match s.trim().to_ascii_uppercase().as_str() {
        "1" | "I" => Ok(LinkKind::One),
        "2" | "II" => Ok(LinkKind::Two),
        _ => Err(format!("expected 1 or 2, got `{s}`")),
    }
}

/// A power ratio as typed: `25dB`, `316lin`, or a bare number whose unit
/// depends on `--linear`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Level {
    Db(f64),
    Linear(f64),
    Bare(f64),
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        let lower = t.to_ascii_lowercase();
        let num = |body: &str| {
            body.trim()
                .parse::<f64>()
                .map_err(|_| format!("cannot read `{s}` as a number"))
        };
        if let Some(body) = lower.strip_suffix("db") {
            Ok(Level::Db(num(body)?))
        } else if let Some(body) = lower.strip_suffix("lin") {
            Ok(Level::Linear(num(body)?))
        } else {
            Ok(Level::Bare(num(&lower)?))
        }
    }
}

impl Level {
    pub fn linear(self, bare_is_linear: bool) -> f64 {
        match self {
            Level::Db(d) => from_db(d),
            Level::Linear(x) => x,
            Level::Bare(x) if bare_is_linear => x,
            Level::Bare(d) => from_db(d),
        }
    }
}

#[derive(Debug, Args)]
pub struct ChannelArgs {
    /// Link direction: 1 (interference-free receiver to interfered one) or 2.
    #[arg(long = "type", value_parser = parse_link)]
    pub link: LinkKind,
    #[arg(long, allow_hyphen_values = true)]
    pub snr1: Level,
    #[arg(long, allow_hyphen_values = true)]
    pub snr2: Level,
    #[arg(long, allow_hyphen_values = true)]
    pub inr2: Level,
    /// Link rate in bits per channel use.
    #[arg(long, default_value_t = 0.0)]
    pub r0: f64,
    /// Read bare numbers as linear ratios instead of dB.
    #[arg(long)]
    pub linear: bool,
}

impl ChannelArgs {
    pub fn params(&self) -> zrelay_core::Result<ChannelParams> {
        let l = self.linear;
        ChannelParams::new(self.snr1.linear(l), self.snr2.linear(l), self.inr2.linear(l), self.r0)
    }
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub beta_points: Option<usize>,
    /// Bisection tolerance for boundary curves, in bits.
    #[arg(long)]
    pub curve_tol: Option<f64>,
    #[arg(long)]
    pub ms_alpha_points: Option<usize>,
    #[arg(long)]
    pub ms_beta_points: Option<usize>,
    #[arg(long)]
    pub ms_ra_points: Option<usize>,
}

impl GridArgs {
    pub fn config(&self) -> zrelay_core::Result<SweepConfig> {
        let d = SweepConfig::default();
        let cfg = SweepConfig {
            beta_points: self.beta_points.unwrap_or(d.beta_points),
            curve_tol: self.curve_tol.unwrap_or(d.curve_tol),
            ms_alpha_points: self.ms_alpha_points.unwrap_or(d.ms_alpha_points),
            ms_beta_points: self.ms_beta_points.unwrap_or(d.ms_beta_points),
            ms_ra_points: self.ms_ra_points.unwrap_or(d.ms_ra_points),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output file; `-` writes to stdout. Defaults to `region.<format>` in the output directory.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, env = "ZRELAY_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetName {
    /// Type I, 25/25/30 dB, link rates 0, 2, 4.
    Type1Strong,
    /// Type I, 25/25/20 dB, link rates 0 and 1.
    Type1Weak,
    /// Type II, 20/20/55 dB, link rates 0, 2, 4.
    Type2Strong,
    /// Type II, 20/20/15 dB, link rates 0 and 2.
    Type2Weak,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels() {
        assert_eq!("25dB".parse::<Level>(), Ok(Level::Db(25.0)));
        assert_eq!(" -3 db".parse::<Level>(), Ok(Level::Db(-3.0)));
        assert_eq!("316.2lin".parse::<Level>(), Ok(Level::Linear(316.2)));
        assert_eq!("7".parse::<Level>(), Ok(Level::Bare(7.0)));
        assert!("abc".parse::<Level>().is_err());
        assert!((Level::Bare(20.0).linear(false) - 100.0).abs() < 1e-12);
        assert_eq!(Level::Bare(20.0).linear(true), 20.0);
        assert!((Level::Db(10.0).linear(true) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn link_kinds() {
        assert_eq!(parse_link("1"), Ok(LinkKind::One));
        assert_eq!(parse_link("ii"), Ok(LinkKind::Two));
        assert!(parse_link("3").is_err());
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
