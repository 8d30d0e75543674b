//! Resonant versus far-detuned driving: how much the excited level is used.
//!
//! `cargo run --release --example raman_regimes`

use lambda_cqed::prelude::*;

fn main() -> Result<()> {
    for name in ["raman1", "raman2"] {
        let mut config = preset(name)?;
        config.steps = 1000;
        let sim = Simulation::new(&config, false)?;
        let rows = sim.time_series()?;
        let max_p3 = rows.iter().map(|o| o.populations[2]).fold(0.0, f64::max);
        let late = &rows[rows.len() * 4 / 5..];
        let mean = |f: &dyn Fn(&lambda_cqed::run::Observation) -> f64| late.iter().map(f).sum::<f64>() / late.len() as f64;
        println!(
            "{name}: Delta = {:.0} Gamma, max P3 = {max_p3:.4}, late <P1> = {:.3}, <P2> = {:.3}, <C_coh> = {:.3}",
            config.detuning_multiple,
            mean(&|o| o.populations[0]),
            mean(&|o| o.populations[1]),
            mean(&|o| o.coherence),
        );
    }
    Ok(())
}
