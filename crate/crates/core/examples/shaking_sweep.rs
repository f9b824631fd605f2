//! Largest shaking of a Bloch-translating packet against drive frequency.
//!
//! Run with `cargo run --release --example shaking_sweep`.

use std::f64::consts::PI;

use bloch_drive::scenarios::sweep_shaking;

fn main() -> bloch_drive::Result<()> {
    let points = sweep_shaking(&[1, 2], &[1.0], (0.5, 10.0), 20, 1.0, PI / 2.0)?;
    println!("{:>3} {:>6} {:>8} {:>12} {:>10}", "n", "F_A", "omega", "shaking_max", "drift");
    for p in points {
        println!(
            "{:3} {:6.2} {:8.3} {:12.5} {:10.5}{}",
            p.n,
            p.amplitude,
            p.omega,
            p.shaking_max,
            p.drift_velocity,
            if p.decreasing { "" } else { "  (rises)" }
        );
    }
    Ok(())
}
