//! The Bessel kernel: two independent evaluation paths and the zeros of 𝒥₀.
//!
//! Run with `cargo run --example bessel`.

use bloch_drive::analytic::signed_bessel;
use bloch_drive::bessel::{bessel_j0_root, bessel_jn, bessel_jn_integral, bessel_jn_series};

fn main() -> bloch_drive::Result<()> {
    println!("{:>3} {:>6} {:>22} {:>10}", "n", "z", "J_n(z)", "|series-integral|");
    for n in [0, 1, 2, 5] {
        for z in [0.5, 1.0, 2.404825557695773, 8.0] {
            let d = (bessel_jn_series(n, z)? - bessel_jn_integral(n, z)?).abs();
            println!("{n:3} {z:6.3} {:22.16} {d:10.2e}", bessel_jn(n, z)?);
        }
    }
    println!();
    for i in 1..=5 {
        println!("zero {i} of J_0: {:.12}", bessel_j0_root(i)?);
    }
    println!("\n(-1)^n J_n(1) for n = -2..=2:");
    for n in -2..=2 {
        println!("{n:3} {:+.12}", signed_bessel(n, 1.0)?);
    }
    Ok(())
}
