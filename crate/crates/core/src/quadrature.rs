//! Adaptive Simpson quadrature for smooth bounded integrands.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values the integrator can accumulate.
pub trait Integrand: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
    /// Real part used when reporting a non-converged estimate.
    fn report(self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn report(self) -> f64 {
        self
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn report(self) -> f64 {
        self.re
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdaptiveSimpson {
    /// Absolute tolerance for the whole interval.
    pub abs_tol: f64,
    /// Maximum bisection depth below a panel.
    pub max_depth: u32,
    /// Intervals are first cut into panels no longer than this, so that
    /// features narrower than the interval (pulses) are never stepped over.
    pub max_panel: f64,
}

impl Default for AdaptiveSimpson {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            max_depth: 40,
            max_panel: 0.25,
        }
    }
}

struct Acc<T> {
    value: T,
    error: f64,
    converged: bool,
}

impl AdaptiveSimpson {
    pub fn with_max_panel(mut self, max_panel: f64) -> Self {
        self.max_panel = max_panel;
        self
    }

    pub fn integrate<T, F>(&self, f: F, a: f64, b: f64) -> Result<T>
    where
        T: Integrand,
        F: Fn(f64) -> T,
    {
        if a == b {
            return Ok(T::zero());
        }
        let (lo, hi, sign) = if b > a { (a, b, 1.0) } else { (b, a, -1.0) };
        let len = hi - lo;
        let panels = (len / self.max_panel).ceil().max(1.0) as usize;
        let h = len / panels as f64;
        let mut acc = Acc {
            value: T::zero(),
            error: 0.0,
            converged: true,
        };
        for p in 0..panels {
            let x0 = lo + p as f64 * h;
            let x1 = if p + 1 == panels { hi } else { x0 + h };
            let m = 0.5 * (x0 + x1);
            let (f0, fm, f1) = (f(x0), f(m), f(x1));
            let whole = simpson(x0, x1, f0, fm, f1);
            let tol = self.abs_tol * (x1 - x0) / len;
            self.refine(&f, x0, x1, f0, fm, f1, whole, tol, 0, &mut acc);
        }
        if !acc.converged {
            return Err(Error::Quadrature {
                a,
                b,
                estimate: (acc.value * sign).report(),
                error_estimate: acc.error,
            });
        }
        Ok(acc.value * sign)
    }

    #[allow(clippy::too_many_arguments)]
    fn refine<T, F>(
        &self,
        f: &F,
        a: f64,
        b: f64,
        fa: T,
        fm: T,
        fb: T,
        whole: T,
        tol: f64,
        depth: u32,
        acc: &mut Acc<T>,
    ) where
        T: Integrand,
        F: Fn(f64) -> T,
    {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(a, m, fa, flm, fm);
        let right = simpson(m, b, fm, frm, fb);
        let delta = left + right - whole;
        let err = delta.magnitude() / 15.0;
        if err <= tol || depth >= self.max_depth || m <= a || m >= b {
            if err > tol {
                acc.converged = false;
            }
            // Richardson-corrected estimate
            acc.value = acc.value + left + right + delta * (1.0 / 15.0);
            acc.error += err;
            return;
        }
        self.refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, acc);
        self.refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, acc);
    }
}

#[inline]
fn simpson<T: Integrand>(a: f64, b: f64, fa: T, fm: T, fb: T) -> T {
    (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
}
