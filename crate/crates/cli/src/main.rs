mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

/// A failed run, tagged with its exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or parameters (exit 1).
    Usage(anyhow::Error),
    /// A verification check failed or could not run (exit 2).
    Verify(String),
    /// Reading or writing a file failed (exit 3).
    Io(anyhow::Error),
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(anyhow::anyhow!(msg.into()))
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Verify(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl From<zrelay_core::Error> for Failure {
    fn from(e: zrelay_core::Error) -> Self {
        Failure::Usage(e.into())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let print = |s: &str| {
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(s.as_bytes());
    };
    match cli.command {
        Command::Classify { channel, json } => print(&commands::classify_cmd(&channel, json)?),
        Command::Region {
            channel,
            grid,
            out,
            format,
            curve,
        } => {
            let (stdout, stderr) = commands::region_cmd(&channel, &grid, &out, format, curve.as_deref())?;
            print(&stdout);
            eprint!("{stderr}");
        }
        Command::Sweep {
            link,
            snr1,
            snr2,
            inr2,
            r0_min,
            r0_max,
            points,
            linear,
            output,
        } => {
            let note = commands::sweep_cmd(
                link,
                snr1,
                snr2,
                inr2,
                r0_min,
                r0_max,
                points,
                linear,
                output.as_deref(),
            )?;
            eprint!("{note}");
        }
        Command::Preset { name, out_dir, grid } => print(&commands::preset_cmd(name, &out_dir, &grid)?),
        Command::Verify {
            seed,
            draws,
            suite,
            json,
        } => {
            let (text, passed) = commands::verify_cmd(seed, draws, &suite, json)?;
            print(&text);
            if !passed {
                return Err(Failure::Verify("verification failed".to_string()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(e) | Failure::Io(e) => eprintln!("error: {e:#}"),
                Failure::Verify(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}
