//! `fpark`: simulations, couplings, exact counts and the acceptance suite.

mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use config::{ExperimentConfig, Flags, Format};
use error::CliError;

#[derive(Parser)]
#[command(name = "fpark", version, about = "Parking on random trees and the frozen Erdős–Rényi process")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Frozen process snapshots on a lambda grid.
    SimulateFrozen(Flags),
    /// Plain Erdős–Rényi snapshots on the same edge stream.
    SimulateEr(Flags),
    /// Parking m uniform cars on a uniform Cayley tree or mapping.
    SimulateParking(Flags),
    /// Run the couplings and verify them against direct parking.
    CoupleVerify(Flags),
    /// Sample nearly parked trees.
    SampleNpt(Flags),
    /// Exact counts.
    Enumerate(Flags),
    /// Brute force against closed forms.
    Oracle(Flags),
    /// Special functions and limit densities.
    Numerics(Flags),
    /// Frozen snapshots over a grid of sizes.
    Sweep(Flags),
    /// Acceptance criteria.
    Accept(Flags),
}

impl Command {
    fn parts(&self) -> (&'static str, &Flags, Format) {
        match self {
            Self::SimulateFrozen(f) => ("simulate-frozen", f, Format::Csv),
            Self::SimulateEr(f) => ("simulate-er", f, Format::Csv),
            Self::SimulateParking(f) => ("simulate-parking", f, Format::Csv),
            Self::CoupleVerify(f) => ("couple-verify", f, Format::Csv),
            Self::SampleNpt(f) => ("sample-npt", f, Format::Csv),
            Self::Enumerate(f) => ("enumerate", f, Format::Json),
            Self::Oracle(f) => ("oracle", f, Format::Json),
            Self::Numerics(f) => ("numerics", f, Format::Json),
            Self::Sweep(f) => ("sweep", f, Format::Csv),
            Self::Accept(f) => ("accept", f, Format::Csv),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Ok(t) = std::env::var("FPARK_THREADS") {
        let threads: usize = t.parse().map_err(|_| CliError::invalid(format!("FPARK_THREADS={t:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::invalid(e.to_string()))?;
    }
    let (name, flags, default_format) = cli.command.parts();
    let cfg = ExperimentConfig::resolve(name, flags, default_format)?;
    let start = Instant::now();
    let (table, seeds) = match name {
        "simulate-frozen" => commands::simulate_frozen(&cfg)?,
        "simulate-er" => commands::simulate_er(&cfg)?,
        "simulate-parking" => commands::simulate_parking(&cfg)?,
        "couple-verify" => commands::couple_verify(&cfg)?,
        "sample-npt" => commands::sample_npt(&cfg)?,
        "enumerate" => commands::enumerate(&cfg)?,
        "oracle" => commands::oracle(&cfg)?,
        "numerics" => commands::numerics(&cfg)?,
        "sweep" => commands::sweep(&cfg)?,
        _ => commands::accept(&cfg)?,
    };
    let accept_quiet = name == "accept" && cfg.out.is_none() && cfg.format == Format::Csv;
    if !accept_quiet {
        output::emit(&table, &cfg, seeds, start.elapsed().as_secs_f64())?;
    }
    if name == "couple-verify" {
        let failed = commands::failed_runs(&table);
        if !failed.is_empty() {
            return Err(CliError::Verification(format!("{} run(s) failed: {}", failed.len(), failed.join(", "))));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.code())
        }
    }
}
