//! Resonant AC+DC driving turns the oscillation into steady transport.
//! Runs the preset and prints its comparison report.
//!
//! Run with `cargo run --release --example bloch_translation`.

use bloch_drive::scenarios::{preset, run_scenario, ScenarioKind};

fn main() -> bloch_drive::Result<()> {
    let outcome = run_scenario(preset(ScenarioKind::BlochTranslation))?;
    let p = outcome.prediction.expect("resonant drive has a prediction");
    println!("drift velocity 2J(-1)^n J_n(F_A/w) sin k0 = {:.6}", p.drift_velocity);
    println!("largest shaking about the drift = {:.4} sites\n", p.extent);
    print!("{}", outcome.report);
    Ok(())
}
