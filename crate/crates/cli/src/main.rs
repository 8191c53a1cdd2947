mod commands;
mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use commands::{Outcome, View};
use config::load;

/// Dense-matrix experiments with generalized eigenvalue and singular value transformations.
#[derive(Debug, Parser)]
#[command(name = "gqsvt", version)]
struct Cli {
    /// JSON configuration for the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every random source; a `seed` in the config wins.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override the residual tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Degree and scaling factor of minimal inverse approximations, as CSV.
    ScalingTable {
        #[arg(long, value_enum, default_value_t = View::Full)]
        view: View,
    },
    /// Eigenvalue transformation of a Hermitian matrix, checked against an eigensolver.
    Gqet,
    /// Singular value transformation by either route, checked against an SVD.
    Gqsvt,
    /// Scaling-factor bound sweep, as CSV.
    Bounds,
    /// Solve phase factors and verify the round trip.
    Phases,
}

fn required(config: &Option<PathBuf>, name: &str) -> Result<PathBuf> {
    config
        .clone()
        .with_context(|| format!("{name} needs --config <path>"))
}

fn run(cli: &Cli) -> Result<Outcome> {
    if let Some(t) = cli.tol {
        anyhow::ensure!(t >= 0.0 && t.is_finite(), "--tol must be a non-negative number");
    }
    let base = cli.config.as_deref().and_then(Path::parent);
    match cli.command {
        Command::ScalingTable { view } => {
            let cfg = match &cli.config {
                Some(p) => load(p)?,
                None => config::ScalingTableConfig::default(),
            };
            commands::scaling_table(&cfg, view)
        }
        Command::Gqet => {
            let cfg = load(&required(&cli.config, "gqet")?)?;
            commands::gqet(&cfg, base, cli.seed, cli.tol)
        }
        Command::Gqsvt => {
            let cfg = load(&required(&cli.config, "gqsvt")?)?;
            commands::gqsvt(&cfg, base, cli.seed, cli.tol)
        }
        Command::Bounds => {
            let cfg = match &cli.config {
                Some(p) => load(p)?,
                None => config::BoundsConfig::default(),
            };
            commands::bounds(&cfg, cli.seed)
        }
        Command::Phases => {
            let cfg = load(&required(&cli.config, "phases")?)?;
            commands::phases(&cfg, base, cli.seed, cli.tol)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(p) => fs::write(p, &outcome.output).with_context(|| format!("writing {}", p.display())),
        None => match std::io::stdout().write_all(outcome.output.as_bytes()) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => r.context("writing stdout"),
        },
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    eprintln!("{}", outcome.summary);
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("tolerance check failed");
        ExitCode::from(1)
    }
}
