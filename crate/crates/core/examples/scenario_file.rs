//! Runs a scenario written inline as TOML and writes the usual outputs.
//!
//! `cargo run --release --example scenario_file -- [out_dir]`

use lambda_cqed::prelude::*;
use lambda_cqed::scenario::parse_config;

const SCENARIO: &str = r#"
atom = "rb87"
intensity_ratio_1 = 2.0
intensity_ratio_2 = 0.5
detuning_multiple = 1.0
nbar1 = 4.0
nbar2 = 0.5
phase1 = 0.7
zetas = [1.0, 0.0, 1.0]
thetas = [0.0, 0.0, 1.5707963267948966]
t_end = 20000.0
steps = 400
snapshots = [0.0, 10000.0]
"#;

fn main() -> Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "scenario_file_out".into());
    let config = parse_config(SCENARIO, "inline").map_err(Error::from)?;
    let options = RunOptions { oracle: true, ..RunOptions::default() };
    let summary = run_scenario(&config, std::path::Path::new(&out), &options)?;
    println!("{} rows written to {out}/", summary.rows);
    if let Some(r) = summary.oracle {
        println!("oracle: max block deviation {:.2e}, passed = {}", r.max_block_deviation, r.passed);
    }
    Ok(())
}
