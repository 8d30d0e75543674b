use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lambda_cqed::oracle::ORACLE_TOL;
use lambda_cqed::run::{run_scenario, RunOptions};
use lambda_cqed::scenario::load_scenario;
use lambda_cqed::Error;

/// Exact Lambda-atom / two-mode cavity dynamics.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write observables.csv, manifest.json and snapshots.
    ///
    /// Scenario files are TOML. Required keys: atom, intensity_ratio_1,
    /// intensity_ratio_2, detuning_multiple, nbar1, nbar2, zetas. Optional
    /// keys (default): name (file stem), delta23_multiple
    /// (detuning_multiple), phase1 (0), phase2 (0), thetas ([0,0,0]),
    /// tail_tol (1e-12), t_start (0), t_end (500), steps (2000),
    /// snapshots ([]), husimi (true).
    Run {
        /// TOML file or preset: state1..state4, raman1, raman2, optionally
        /// prefixed by li6/ or rb87/.
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        out: PathBuf,
        /// Cross-check against the numeric propagator; also enables
        /// unequal detunings.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = ORACLE_TOL)]
        oracle_tol: f64,
        /// Comma-separated snapshot times.
        #[arg(long, value_delimiter = ',')]
        snapshots: Vec<f64>,
        /// Add a time column in nanoseconds.
        #[arg(long)]
        ns: bool,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::UnequalDetuning { .. } | Error::UnknownAtom(_) | Error::InvalidAtom(_) => 2,
        Error::OracleMismatch { .. } => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let Command::Run {
        scenario,
        out,
        oracle,
        oracle_tol,
        snapshots,
        ns,
    } = Cli::parse().command;
    let options = RunOptions {
        oracle,
        oracle_tolerance: oracle_tol,
        snapshots,
        ns,
    };
    let result = load_scenario(&scenario)
        .map_err(Error::from)
        .and_then(|config| run_scenario(&config, &out, &options));
    match result {
        Ok(summary) => {
            println!("wrote {} rows to {}", summary.rows, out.join("observables.csv").display());
            if let Some(r) = summary.oracle {
                println!(
                    "oracle: max block deviation {:.3e}, max state distance {:.3e}",
                    r.max_block_deviation, r.max_state_distance
                );
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
