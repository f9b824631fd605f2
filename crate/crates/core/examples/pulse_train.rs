//! Four π/2 pulses accelerate, stop, turn and stop the packet, and the
//! pulse shape does not matter, only the impulse it carries.
//!
//! Run with `cargo run --release --example pulse_train`.

use bloch_drive::scenarios::{compare_trains, preset, run_scenario, sawtooth_counterpart, ScenarioKind};

fn main() -> bloch_drive::Result<()> {
    let gaussian = preset(ScenarioKind::PulseTrain);
    let outcome = run_scenario(gaussian.clone())?;
    for row in outcome.report.rows.iter().filter(|r| r.quantity.starts_with("k_after") || r.quantity.starts_with("v_plateau")) {
        println!("{:<16} predicted {:+.5}  measured {:+.5}", row.quantity, row.predicted, row.measured);
    }

    let mut sawtooth = gaussian.clone();
    sawtooth.field = Some(sawtooth_counterpart(gaussian.field()?)?);
    println!();
    print!("{}", compare_trains(gaussian, sawtooth)?);
    Ok(())
}
