//! Slight detuning from resonance: the averaged trajectory performs a
//! slow, large Bloch oscillation with a renormalized hopping.
//!
//! Run with `cargo run --release --example super_bloch`.

use std::f64::consts::PI;

use bloch_drive::analytic::{gwp_build, gwp_trajectory, predict_super_bloch, PacketParams};
use bloch_drive::fields::{Drive, FieldProfile};
use bloch_drive::lattice::{LatticeSpec, TimeGrid};
use bloch_drive::numeric::{run_evolution, Method};

fn main() -> bloch_drive::Result<()> {
    let (n, delta, amplitude, omega) = (1, 0.02, 1.0, 1.0);
    let lattice = LatticeSpec::chain(200, 1.0)?;
    let packet = PacketParams::new(PI / 2.0, 100.0, 0.1)?;
    let p = predict_super_bloch(n, delta, amplitude, omega, 1.0, packet.k0)?;
    println!("period {:.3} (= {:.3}π), extent {:.3} sites", p.period, p.period / PI, p.extent);

    let drive = Drive::Field(FieldProfile::ac_dc(n, delta, amplitude, omega)?);
    // half a period is enough to see the turning point
    let grid = TimeGrid::with_step(0.0, 0.5 * p.period, 0.02)?;
    let run = run_evolution(&gwp_build(&packet, &lattice)?, &lattice, &drive, &grid, Method::ExactDiag, 500)?;
    let exact = gwp_trajectory(&packet, &drive, 1.0, &run.series.times)?;
    println!("{:>9} {:>10} {:>10} {:>10}", "t", "center", "N_A + D", "N_A + D̄");
    for (i, e) in exact.iter().enumerate() {
        println!(
            "{:9.2} {:10.3} {:10.3} {:10.3}",
            e.time,
            run.series.center[i],
            packet.center + e.displacement,
            packet.center + p.mean_displacement(e.time)
        );
    }
    Ok(())
}
