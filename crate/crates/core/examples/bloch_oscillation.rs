//! A packet under a static force oscillates instead of accelerating.
//!
//! Run with `cargo run --release --example bloch_oscillation`.

use std::f64::consts::PI;

use bloch_drive::analytic::{gwp_build, predict_bloch_oscillation, PacketParams};
use bloch_drive::fields::{Drive, FieldProfile};
use bloch_drive::lattice::{LatticeSpec, TimeGrid};
use bloch_drive::numeric::{run_evolution, Method};

fn main() -> bloch_drive::Result<()> {
    let (f0, j) = (0.2, 1.0);
    let lattice = LatticeSpec::chain(200, j)?;
    let packet = PacketParams::new(PI / 2.0, 100.0, 0.1)?;
    let prediction = predict_bloch_oscillation(f0, j, packet.k0)?;
    println!("period {:.4}, extent {:.4} sites", prediction.period, prediction.extent);

    let grid = TimeGrid::with_step(0.0, prediction.period, 0.01)?;
    let run = run_evolution(&gwp_build(&packet, &lattice)?, &lattice, &Drive::Field(FieldProfile::constant(f0)), &grid, Method::ExactDiag, 250)?;
    println!("{:>8} {:>10} {:>10} {:>8}", "t", "center", "D(t)", "width");
    for i in 0..run.series.len() {
        let t = run.series.times[i];
        println!(
            "{t:8.3} {:10.4} {:10.4} {:8.4}",
            run.series.center[i],
            packet.center + prediction.mean_displacement(t),
            run.series.width[i]
        );
    }
    Ok(())
}
