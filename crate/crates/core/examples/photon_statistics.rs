//! Mandel Q and phase-space area of each mode over time.
//!
//! `cargo run --release --example photon_statistics -- [preset]`

use lambda_cqed::prelude::*;

fn main() -> Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "state3".into());
    let mut config = preset(&name)?;
    config.steps = 50;
    let sim = Simulation::new(&config, false)?;
    println!("{:>9} {:>10} {:>10} {:>8} {:>8}", "t", "Q1", "Q2", "A1", "A2");
    for o in sim.time_series()? {
        println!(
            "{:>9.2} {:>10.5} {:>10.5} {:>8.4} {:>8.4}",
            o.t, o.mandel[0], o.mandel[1], o.area[0], o.area[1]
        );
    }
    Ok(())
}
