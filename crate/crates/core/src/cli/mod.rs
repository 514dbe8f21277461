//! Command-line front end.

pub mod config;
pub mod sweep;
pub mod validate;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use config::{parse_config, parse_config_str, to_config_string, RunConfig, SweepSpec};
pub use validate::{validate, Report, ValidateOptions};

use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fdnoma",
    version,
    about = "Outage and ergodic-rate sweeps for a full-duplex cooperative NOMA relay"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Outage probability against SNR, every method, both users
    SweepOp,
    /// FD outage over the hardware-impairment / SIC-residual plane
    SurfaceOp,
    /// Ergodic rates against SNR, Monte Carlo and high-SNR limits
    SweepEr,
    /// Cross-check the evaluators and print a pass/fail report
    Validate,
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// Configuration file of `key = value` lines
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when omitted or `-`
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Monte Carlo trials per point, overrides the config
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// Monte Carlo seed, overrides the config
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; all cores when omitted
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Suppress progress and passing checks
    #[arg(long, global = true)]
    pub quiet: bool,
    #[arg(long, global = true, hide = true)]
    pub inject_series_fault: bool,
}

fn load(common: &CommonArgs) -> Result<RunConfig> {
    let mut run = match &common.config {
        Some(path) => parse_config(path)?,
        None => RunConfig::default(),
    };
    if let Some(t) = common.trials {
        run.mc.trials = t;
    }
    if let Some(s) = common.seed {
        run.mc.seed = s;
    }
    run.mc.validate()?;
    Ok(run)
}

fn open_out(out: Option<&Path>) -> Result<Box<dyn Write>> {
    match out {
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(p) if p == Path::new("-") => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(p) => {
            let file = File::create(p).map_err(|source| Error::Io {
                path: p.to_path_buf(),
                source,
            })?;
            Ok(Box::new(BufWriter::new(file)))
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let common = &cli.common;
    let run = load(common)?;
    let out = common.out.as_deref();
    let note = |msg: String| {
        if !common.quiet {
            eprintln!("{msg}");
        }
    };
    match cli.command {
        Command::SweepOp => {
            note(format!("sweep-op: {} trials per point", run.mc.trials));
            let rows = sweep::sweep_op(&run)?;
            sweep::write_op_csv(&rows, open_out(out)?)?;
            note(format!("sweep-op: {} rows", rows.len()));
        }
        Command::SurfaceOp => {
            note(format!("surface-op: {} trials per point", run.mc.trials));
            let rows = sweep::surface_op(&run)?;
            sweep::write_surface_csv(&run, &rows, open_out(out)?)?;
            note(format!("surface-op: {} rows", rows.len()));
        }
        Command::SweepEr => {
            note(format!("sweep-er: {} trials per point", run.mc.trials));
            let rows = sweep::sweep_er(&run)?;
            sweep::write_er_csv(&rows, open_out(out)?)?;
            note(format!("sweep-er: {} rows", rows.len()));
        }
        Command::Validate => {
            let opts = ValidateOptions {
                inject_series_fault: common.inject_series_fault,
            };
            let report = validate(&run, opts)?;
            let text = if common.quiet {
                report
                    .failures()
                    .map(|c| format!("FAIL {}: {}\n", c.name, c.detail))
                    .collect::<String>()
            } else {
                report.to_string()
            };
            let mut w = open_out(out)?;
            w.write_all(text.as_bytes())
                .and_then(|_| w.flush())
                .map_err(|source| Error::Io {
                    path: out.map(Path::to_path_buf).unwrap_or_else(|| "<stdout>".into()),
                    source,
                })?;
            if !report.passed() {
                return Ok(EXIT_VALIDATION_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = match cli.common.workers {
        Some(0) => Err(Error::param("workers", "must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::param("workers", e.to_string()))
            .and_then(|pool| pool.install(|| execute(cli))),
        None => execute(cli),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
