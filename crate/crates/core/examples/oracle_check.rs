//! Closed-form propagator against numeric diagonalisation of every block.
//!
//! `cargo run --release --example oracle_check -- [preset]`

use lambda_cqed::oracle::{compare_evolutions, ORACLE_TOL};
use lambda_cqed::prelude::*;
use lambda_cqed::run::ORACLE_TIMES;

fn main() -> Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "raman1".into());
    let mut config = preset(&name)?;
    config.tail_tol = 1e-10;
    let sim = Simulation::new(&config, false)?;
    let report = compare_evolutions(&sim.model, &sim.packet, &ORACLE_TIMES, ORACLE_TOL)?;
    println!("{name}: {} blocks, times {:?}", report.blocks_compared, report.times);
    println!("  max |U_closed - U_numeric|   {:.3e}", report.max_block_deviation);
    println!("  max |E_dressed - E_numeric|  {:.3e}", report.max_spectral_deviation);
    println!("  max state distance           {:.3e}", report.max_state_distance);
    println!("  max norm drift               {:.3e}", report.max_norm_drift);
    println!("  {}", if report.passed { "agree" } else { "DISAGREE" });
    Ok(())
}
