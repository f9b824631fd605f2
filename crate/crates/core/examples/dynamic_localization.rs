//! At a zero of the Bessel function the effective hopping vanishes and
//! the packet stops drifting; off the zero it moves again.
//!
//! Run with `cargo run --release --example dynamic_localization`.

use std::f64::consts::PI;

use bloch_drive::analytic::{gwp_build, predict_bloch_translation, PacketParams};
use bloch_drive::bessel::bessel_j0_root;
use bloch_drive::fields::{Drive, FieldProfile};
use bloch_drive::lattice::{LatticeSpec, TimeGrid};
use bloch_drive::numeric::{run_evolution, Method};

fn main() -> bloch_drive::Result<()> {
    let omega = 1.0;
    let root = bessel_j0_root(1)?;
    let lattice = LatticeSpec::chain(200, 1.0)?;
    let packet = PacketParams::new(PI / 2.0, 100.0, 0.1)?;
    let psi = gwp_build(&packet, &lattice)?;
    let tau = 2.0 * PI / omega;

    println!("{:>8} {:>12} {:>12} {:>6}", "F_A/w", "predicted v", "measured v", "kind");
    for scale in [0.9, 0.95, 1.0, 1.05, 1.1] {
        let amplitude = scale * root * omega;
        let p = predict_bloch_translation(0, amplitude, omega, 1.0, packet.k0)?;
        let drive = Drive::Field(FieldProfile::ac_dc(0, 0.0, amplitude, omega)?);
        let grid = TimeGrid::with_step(0.0, 4.0 * tau, tau / 400.0)?;
        let run = run_evolution(&psi, &lattice, &drive, &grid, Method::ExactDiag, grid.steps)?;
        let s = &run.series;
        let v = (s.center[s.len() - 1] - s.center[0]) / (4.0 * tau);
        println!("{:8.4} {:12.5} {:12.5} {:>6}", amplitude / omega, p.drift_velocity, v, p.kind.label());
    }
    Ok(())
}
