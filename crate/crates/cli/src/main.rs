//! `vortexgas`: command-line runner for the vortex-gas toolkit.
//!
//! Every run consumes one JSON config document, writes CSV/JSON artifacts plus
//! a manifest into the output directory, and is deterministic for a fixed
//! config and seed. Errors exit non-zero with a machine-readable record on
//! stderr (and in error.json when the output directory is writable).

// `!(x > y)` is the NaN-rejecting comparison form, as in the library crate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Overrides(String),
    #[error("{0}")]
    Admissibility(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Physics(#[from] vortex_gas::Error),
}

impl CliError {
    pub fn config(message: String) -> Self {
        CliError::Config(message)
    }
    pub fn overrides(message: String) -> Self {
        CliError::Overrides(message)
    }
    pub fn admissibility(message: String) -> Self {
        CliError::Admissibility(message)
    }
    pub fn io(message: String) -> Self {
        CliError::Io(message)
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Overrides(_) => "override",
            CliError::Admissibility(_) => "admissibility",
            CliError::Io(_) => "io",
            CliError::Physics(vortex_gas::Error::Inadmissible { .. }) => "admissibility",
            CliError::Physics(_) => "numerical",
        }
    }
}

#[derive(Parser)]
#[command(name = "vortexgas", version, about = "Point-vortex gas simulator and analysis toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the vortex equations of motion.
    Simulate(RunArgs),
    /// Metropolis sampling of the neutral gas at one temperature.
    Sample(RunArgs),
    /// Independent sampling runs across a beta grid.
    Scan(RunArgs),
    /// Sample the flow field of a divisor on a grid.
    Field(RunArgs),
    /// Landau-Ginzburg order parameter across temperature.
    OrderParameter(RunArgs),
    /// Recompute conserved quantities along a stored trajectory.
    Check(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for artifacts (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Override the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override a scalar config field, e.g. --set sample.beta=2.0 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    kind: &'a str,
    message: String,
}

fn main() {
    init_thread_pool();
    let cli = Cli::parse();
    let (name, args) = match &cli.command {
        Command::Simulate(a) => ("simulate", a),
        Command::Sample(a) => ("sample", a),
        Command::Scan(a) => ("scan", a),
        Command::Field(a) => ("field", a),
        Command::OrderParameter(a) => ("order-parameter", a),
        Command::Check(a) => ("check", a),
    };
    match run(name, args) {
        Ok(()) => {}
        Err(error) => {
            let record = ErrorRecord {
                kind: error.kind(),
                message: error.to_string(),
            };
            let encoded = serde_json::to_string(&serde_json::json!({ "error": record }))
                .unwrap_or_else(|_| format!("{{\"error\":{{\"message\":\"{error}\"}}}}"));
            eprintln!("{encoded}");
            // Best effort: leave the record next to any partial artifacts.
            let _ = std::fs::write(args.out.join("error.json"), format!("{encoded}\n"));
            std::process::exit(1);
        }
    }
}

/// VORTEXGAS_THREADS caps worker parallelism (the beta-scan chains).
fn init_thread_pool() {
    if let Ok(value) = std::env::var("VORTEXGAS_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            if threads > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn run(name: &str, args: &RunArgs) -> Result<(), CliError> {
    let start = Instant::now();
    std::fs::create_dir_all(&args.out)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", args.out.display())))?;
    let (doc, resolved) = config::load(&args.config, &args.set, args.seed)?;
    let config_dir = args
        .config
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."))
        .to_path_buf();

    let artifacts = match name {
        "simulate" => commands::run_simulate(&doc, &args.out)?,
        "sample" => commands::run_sample(&doc, &args.out)?,
        "scan" => commands::run_scan(&doc, &args.out)?,
        "field" => commands::run_field(&doc, &args.out)?,
        "order-parameter" => commands::run_order_parameter(&doc, &args.out)?,
        "check" => commands::run_check(&doc, &args.out, &config_dir)?,
        _ => unreachable!("clap restricts the command set"),
    };

    let manifest = output::Manifest {
        command: name.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: doc.seed,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        artifacts: artifacts.clone(),
        config: resolved,
    };
    output::write_manifest(&args.out, &manifest)?;
    println!(
        "{name}: wrote {} + manifest.json to {}",
        artifacts.join(", "),
        args.out.display()
    );
    Ok(())
}
