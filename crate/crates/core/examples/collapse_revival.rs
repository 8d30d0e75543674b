//! Excited-state population of a preset, printed as a coarse text plot.
//!
//! `cargo run --release --example collapse_revival -- [preset]`

use lambda_cqed::prelude::*;

fn main() -> Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "state1".into());
    let mut config = preset(&name)?;
    config.steps = 200;
    let sim = Simulation::new(&config, false)?;
    println!("{name}: t_end = {:.1}, lattice dimension {}", config.t_end, sim.packet.lattice().total_dim());
    for obs in sim.time_series()? {
        let [p1, p2, p3] = obs.populations;
        let bar = "#".repeat((p3 * 60.0).round() as usize);
        println!("{:>9.2}  P1={p1:.3} P2={p2:.3} P3={p3:.3} |{bar}", obs.t);
    }
    Ok(())
}
