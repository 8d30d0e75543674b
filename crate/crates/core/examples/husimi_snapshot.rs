//! Husimi Q function of mode 1 at one time, as ASCII shading.
//!
//! `cargo run --release --example husimi_snapshot -- [preset] [t]`

use lambda_cqed::observables::{husimi, GridSpec};
use lambda_cqed::prelude::*;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "state1".into());
    let t: f64 = args.next().map_or(250.0, |s| s.parse().expect("a time"));
    let config = preset(&name)?;
    let sim = Simulation::new(&config, false)?;
    let rho = field_rdm(&sim.state_at(t)?).mode(Mode::One);

    let fine = GridSpec::for_mean_photons(config.nbar1.max(config.nbar2));
    let coarse = GridSpec { step: 0.2, ..fine };
    let grid = husimi(&rho, coarse);
    let shades = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];
    let max = grid.max();
    let n = coarse.points();
    for iy in (0..n).rev() {
        let line: String = (0..n)
            .map(|ix| shades[((grid.value(ix, iy) / max) * 9.0).round() as usize])
            .collect();
        println!("{line}");
    }

    let integral = husimi(&rho, fine).integral();
    println!("t = {t}: max Q = {max:.5}, integral on the fine grid = {integral:.6}");
    Ok(())
}
