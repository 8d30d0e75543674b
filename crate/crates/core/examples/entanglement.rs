//! Atom-field and mode-mode entanglement measures over time.
//!
//! `cargo run --release --example entanglement -- [preset]`

use lambda_cqed::prelude::*;

fn main() -> Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "state4".into());
    let mut config = preset(&name)?;
    config.steps = 25;
    let sim = Simulation::new(&config, false)?;
    println!("{:>9} {:>8} {:>8} {:>8} {:>8} {:>10}", "t", "S_lin", "S_A", "S_1", "S_2", "I(1:2)");
    for o in sim.time_series()? {
        let e = o.entropies;
        println!(
            "{:>9.2} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>10.5}",
            o.t, e.linear_atom, e.vn_atom, e.vn_mode1, e.vn_mode2, e.mi_modes
        );
    }

    let t = config.t_end / 2.0;
    let ppt = sim.snapshot(t)?.ppt;
    println!(
        "t = {t:.1}: smallest eigenvalue of the partial transpose {:.3e} (modes {}entangled)",
        ppt.min_eigenvalue,
        if ppt.min_eigenvalue < -1e-10 { "" } else { "not shown " }
    );
    Ok(())
}
