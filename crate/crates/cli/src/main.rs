//! `magskin`: batch front-end producing CSV/JSON tables of the skin-effect
//! model and its convergence studies.

mod commands;
mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Parser, Subcommand};

use crate::commands::{Context, Options};
use crate::config::RunConfig;
use crate::output::{write_json, Format};

/// Invalid invocation or configuration; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Parser)]
#[command(
    name = "magskin",
    version,
    about = "Skin effect in magnetic conductors: tables and convergence studies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration (SI units in key names).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Impedance order (ibc-*) or truncation order (expansion-error).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(0..=2))]
    k: Option<u32>,
    /// Azimuthal modes, comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    modes: Option<Vec<i32>>,
    /// `eps` values, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    /// Worker threads for sweeps; all cores when absent.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Derived parameters.
    Params,
    /// Numerical and asymptotic skin depths with the comparison laws.
    SkinDepth,
    /// Two-term boundary-layer profile along the normal.
    ProfileTable,
    /// Impedance operator coefficients.
    IbcFactors,
    /// Shell error of an impedance condition against the exact solution.
    IbcSweep,
    /// Shell error of the truncated expansion against the exact solution.
    ExpansionError,
    /// Power-law fits of every approximation and mode.
    Convergence,
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(modes) = &cli.modes {
        if modes.is_empty() {
            return Err(UsageError("--modes: empty list".into()).into());
        }
    }
    let ctx = Context {
        cfg,
        opts: Options {
            k: cli.k,
            modes: cli.modes.clone(),
            eps: cli.eps.clone(),
        },
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        pool = pool.num_threads(n as usize);
    }
    let pool = pool.build()?;
    let artifact = pool.install(|| match cli.command {
        Command::Params => commands::params(&ctx),
        Command::SkinDepth => commands::skin_depth(&ctx),
        Command::ProfileTable => commands::profile_table(&ctx),
        Command::IbcFactors => commands::ibc_factors(&ctx),
        Command::IbcSweep => commands::ibc_sweep(&ctx),
        Command::ExpansionError => commands::expansion_error(&ctx),
        Command::Convergence => commands::convergence(&ctx),
    })?;

    let mut bytes = Vec::new();
    match cli.format.unwrap_or(artifact.default_format) {
        Format::Csv => artifact.table.write_csv(&mut bytes)?,
        Format::Json => write_json(&mut bytes, &artifact.json())?,
    }
    match &cli.out {
        Some(path) => std::fs::write(path, &bytes).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
