//! Bessel functions of the first kind, 𝒥_n(z), for integer order.
//!
//! Two independent evaluation paths are kept: the ascending power series
//! (used for |z| ≤ 12) and Bessel's integral representation
//! `(1/π)∫₀^π cos(nθ − z sinθ) dθ` (used beyond). Tests check one against
//! the other.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const MAX_ORDER: u32 = 20;
pub const MAX_ARGUMENT: f64 = 50.0;
/// Above this |z| the series loses too many digits to cancellation.
pub const SERIES_LIMIT: f64 = 12.0;
const SERIES_TERMS: usize = 60;
/// Nodes of the periodic trapezoid rule on [0, π]; aliasing error is of
/// order 𝒥_{2M−n}(z), negligible for |z| ≤ 50.
const INTEGRAL_NODES: usize = 256;

fn check(n: u32, z: f64) -> Result<()> {
    if n > MAX_ORDER {
        return Err(Error::arg(format!("Bessel order {n} exceeds {MAX_ORDER}")));
    }
    if !(z.abs() <= MAX_ARGUMENT) {
        return Err(Error::arg(format!("Bessel argument {z} outside [-{MAX_ARGUMENT}, {MAX_ARGUMENT}]")));
    }
    Ok(())
}

/// 𝒥_n(z) for `n ≤ 20`, `|z| ≤ 50`, absolute error ≲ 1e-12.
pub fn bessel_jn(n: u32, z: f64) -> Result<f64> {
    check(n, z)?;
    if z.abs() <= SERIES_LIMIT {
        Ok(series(n, z))
    } else {
        Ok(integral(n, z))
    }
}

/// Power-series path, `Σ_m (−1)^m (z/2)^{2m+n} / (m!(m+n)!)`.
pub fn bessel_jn_series(n: u32, z: f64) -> Result<f64> {
    check(n, z)?;
    Ok(series(n, z))
}

/// Integral-representation path.
pub fn bessel_jn_integral(n: u32, z: f64) -> Result<f64> {
    check(n, z)?;
    Ok(integral(n, z))
}

fn series(n: u32, z: f64) -> f64 {
    let half = 0.5 * z;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let q = -half * half;
    let mut sum = term;
    for m in 1..SERIES_TERMS {
        term *= q / (m as f64 * (m as f64 + n as f64));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) && m > 2 {
            break;
        }
    }
    sum
}

fn integral(n: u32, z: f64) -> f64 {
    // The integrand is even and 2π-periodic in θ, so the trapezoid rule
    // converges geometrically.
    let h = PI / INTEGRAL_NODES as f64;
    let f = |theta: f64| (n as f64 * theta - z * theta.sin()).cos();
    let mut sum = 0.5 * (f(0.0) + f(PI));
    for i in 1..INTEGRAL_NODES {
        sum += f(i as f64 * h);
    }
    sum * h / PI
}

/// The `index`-th positive zero of 𝒥₀ (index 1..=5), by bisection to 1e-12.
pub fn bessel_j0_root(index: u32) -> Result<f64> {
    if !(1..=5).contains(&index) {
        return Err(Error::arg(format!("root index must be in 1..=5, got {index}")));
    }
    let j0 = |x: f64| bessel_jn(0, x).expect("argument in range");
    let step = 0.25;
    let mut found = 0;
    let mut a = step;
    let mut fa = j0(a);
    loop {
        let b = a + step;
        let fb = j0(b);
        if fa.signum() != fb.signum() {
            found += 1;
            if found == index {
                return Ok(bisect(j0, a, b, fa));
            }
        }
        a = b;
        fa = fb;
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    while b - a > 1e-12 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
