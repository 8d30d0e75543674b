//! Dressed energies and eigenvectors of the first few blocks.
//!
//! `cargo run --example dressed_spectrum -- [detuning_multiple]`

use lambda_cqed::prelude::*;

fn main() -> Result<()> {
    let n: f64 = std::env::args().nth(1).map_or(Ok(2.0), |s| s.parse()).expect("a number");
    let atom = builtin_atom("li6")?;
    let mu13 = rabi_from_intensity(atom.gamma_bar, 3.0)?;
    let mu23 = rabi_from_intensity(atom.gamma_bar, 1.0)?;
    let model = Model::new(atom.clone(), mu13, mu23, n * atom.gamma_bar, n * atom.gamma_bar)?;

    println!("mu13 = {mu13:.6}, mu23 = {mu23:.6}, Delta = {:.6}", model.coupling.delta13);
    println!("{:>4} {:>4} {:>12} {:>12} {:>12}  Psi0 on (chi1, chi2, chi3)", "m1", "m2", "E+ - E0", "E0", "E- - E0");
    for m1 in 1..=4 {
        for m2 in 1..=m1 {
            let db = dressed_block(BlockIndex::new(m1, m2), &model)?;
            let psi0 = db.o_matrix[1];
            println!(
                "{m1:>4} {m2:>4} {:>12.6} {:>12.6} {:>12.6}  ({:+.4}, {:+.4}, {:+.4})",
                db.e_plus - db.e0,
                db.e0,
                db.e_minus - db.e0,
                psi0[0],
                psi0[1],
                psi0[2]
            );
        }
    }
    Ok(())
}
