//! `mpm` — synthesize an omnidirectional path-loss model from a directional
//! one over a multi-elliptical scattering geometry.
//!
//! Verbs:
//! - `run <config>`     run the synthesis, write `points.csv` + `summary.toml`
//! - `check <config>`   validate the config and list every violation
//! - `compare <config>` like `run`, but the reference model block is required
//!
//! Exit codes: 0 success, 1 validation failure, 2 runtime failure.

mod output;

use anyhow::Context;
use clap::{Parser, Subcommand};
use mpm_core::config::{ConfigError, ScenarioConfig};
use mpm_core::metrics::compare_models;
use mpm_core::synthesis::synthesize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mpm", version, about = "Omnidirectional path-loss model synthesis")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,

    /// Suppress informational output.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the synthesis and export per-distance points plus a summary.
    Run { config: PathBuf },
    /// Validate a scenario config without running it.
    Check { config: PathBuf },
    /// Run the synthesis and compare against the configured reference model.
    Compare { config: PathBuf },
}

const EXIT_VALIDATION: u8 = 1;
const EXIT_RUNTIME: u8 = 2;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}

fn dispatch(cli: &Cli) -> anyhow::Result<ExitCode> {
    match &cli.command {
        Command::Check { config } => check(config, cli.quiet),
        Command::Run { config } => run(config, cli, false),
        Command::Compare { config } => run(config, cli, true),
    }
}

fn load(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    ScenarioConfig::from_path(path)
}

fn check(path: &Path, quiet: bool) -> anyhow::Result<ExitCode> {
    let config = match load(path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return Ok(ExitCode::from(EXIT_VALIDATION));
        }
    };
    let diags = config.validate();
    if diags.is_empty() {
        if !quiet {
            println!("ok");
        }
        Ok(ExitCode::SUCCESS)
    } else {
        for d in &diags {
            println!("{d}");
        }
        Ok(ExitCode::from(EXIT_VALIDATION))
    }
}

fn run(path: &Path, cli: &Cli, require_reference: bool) -> anyhow::Result<ExitCode> {
    let config = match load(path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return Ok(ExitCode::from(EXIT_VALIDATION));
        }
    };
    let built = match config.build() {
        Ok(b) => b,
        Err(e) => {
            eprintln!("{e}");
            return Ok(ExitCode::from(EXIT_VALIDATION));
        }
    };
    if require_reference && built.reference.is_none() {
        eprintln!("reference: a reference model block is required by `compare`");
        return Ok(ExitCode::from(EXIT_VALIDATION));
    }

    let result = synthesize(&built.scenario).context("synthesis failed")?;
    let comparison = match &built.reference {
        Some(reference) => {
            let grid: Vec<f64> = built.scenario.distances.points().collect();
            Some(compare_models(reference, &result.omni_model, &grid)?)
        }
        None => None,
    };

    std::fs::create_dir_all(&cli.out_dir)
        .with_context(|| format!("cannot create {}", cli.out_dir.display()))?;
    let points_path = cli.out_dir.join("points.csv");
    let summary_path = cli.out_dir.join("summary.toml");
    output::write_points_csv(&points_path, &result)
        .with_context(|| format!("cannot write {}", points_path.display()))?;
    let summary = output::Summary::new(&config, &built, &result, comparison.as_ref());
    output::write_summary(&summary_path, &summary)
        .with_context(|| format!("cannot write {}", summary_path.display()))?;

    if !cli.quiet {
        println!(
            "{}: n_omni = {:.4}, sigma = {:.4} dB ({} distances)",
            built.name,
            result.omni_model.ple_n,
            result.omni_model.sigma,
            result.rows.len()
        );
        if let Some(report) = &comparison {
            println!(
                "vs reference (n = {:.4}): MAE = {:.4} dB, RMSE = {:.4} dB over M = {}",
                built.reference.as_ref().expect("present").ple_n,
                report.mae_db,
                report.rmse_db,
                report.m
            );
        }
        println!("wrote {}", points_path.display());
        println!("wrote {}", summary_path.display());
    }
    Ok(ExitCode::SUCCESS)
}
