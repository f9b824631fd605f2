//! Homogeneous driving profiles and the time integrals every propagator
//! and predictor consumes: the impulse `I(t′,t) = ∫F`, the pair
//! `u − iv = ∫ e^{−iI}`, the phase shift and the effective hopping.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::AdaptiveSimpson;

/// Gaussian pulses contribute nothing beyond this many widths from their
/// centre in the closed-form impulse (erf(8) rounds to 1 in f64).
pub const GAUSSIAN_TRUNCATION: f64 = 8.0;

/// One isosceles-triangle pulse, parameterized by the area it carries.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SawtoothPulse {
    pub center: f64,
    /// Full base width.
    pub width: f64,
    pub impulse: f64,
}

impl SawtoothPulse {
    pub fn peak(&self) -> f64 {
        2.0 * self.impulse / self.width
    }

    fn value(&self, t: f64) -> f64 {
        let half = 0.5 * self.width;
        let x = (t - self.center).abs();
        if x >= half {
            0.0
        } else {
            self.peak() * (1.0 - x / half)
        }
    }

    /// Area accumulated from the left foot up to `t`.
    fn cumulative(&self, t: f64) -> f64 {
        let half = 0.5 * self.width;
        let x = t - self.center;
        if x <= -half {
            0.0
        } else if x >= half {
            self.impulse
        } else if x <= 0.0 {
            let s = x + half;
            0.5 * self.impulse * (s / half).powi(2)
        } else {
            let s = half - x;
            self.impulse - 0.5 * self.impulse * (s / half).powi(2)
        }
    }
}

/// Time profile of a homogeneous force `F(t)`. As a flux profile the same
/// variants describe `φ(t)` directly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FieldProfile {
    Constant {
        f0: f64,
    },
    /// `F(t) = (n + δ)ω + F_A cos(ωt)`
    AcDc {
        n: i32,
        #[serde(default)]
        delta: f64,
        #[serde(alias = "f_a")]
        amplitude: f64,
        omega: f64,
    },
    /// `F(t) = Σ_n √π/(2σ) exp[−(t − T_n)²/σ²]`; each pulse carries π/2.
    GaussianTrain {
        sigma: f64,
        centers: Vec<f64>,
    },
    SawtoothTrain {
        pulses: Vec<SawtoothPulse>,
    },
    /// Piecewise-linear interpolation through the samples.
    Tabulated {
        times: Vec<f64>,
        values: Vec<f64>,
    },
}

impl FieldProfile {
    pub fn constant(f0: f64) -> Self {
        FieldProfile::Constant { f0 }
    }

    pub fn ac_dc(n: i32, delta: f64, amplitude: f64, omega: f64) -> Result<Self> {
        let p = FieldProfile::AcDc {
            n,
            delta,
            amplitude,
            omega,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn gaussian_train(sigma: f64, centers: Vec<f64>) -> Result<Self> {
        let p = FieldProfile::GaussianTrain { sigma, centers };
        p.validate()?;
        Ok(p)
    }

    pub fn sawtooth_train(pulses: Vec<SawtoothPulse>) -> Result<Self> {
        let p = FieldProfile::SawtoothTrain { pulses };
        p.validate()?;
        Ok(p)
    }

    pub fn tabulated(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let p = FieldProfile::Tabulated { times, values };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |x: f64, what: &str| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::arg(format!("{what} must be finite")))
            }
        };
        match self {
            FieldProfile::Constant { f0 } => finite(*f0, "f0"),
            FieldProfile::AcDc {
                delta,
                amplitude,
                omega,
                ..
            } => {
                finite(*delta, "delta")?;
                finite(*amplitude, "amplitude")?;
                if !(*omega > 0.0 && omega.is_finite()) {
                    return Err(Error::arg(format!("omega must be positive, got {omega}")));
                }
                Ok(())
            }
            FieldProfile::GaussianTrain { sigma, centers } => {
                if !(*sigma > 0.0 && sigma.is_finite()) {
                    return Err(Error::arg(format!("sigma must be positive, got {sigma}")));
                }
                centers.iter().try_for_each(|c| finite(*c, "pulse centre"))?;
                strictly_increasing(centers, "pulse centres")
            }
            FieldProfile::SawtoothTrain { pulses } => {
                for p in pulses {
                    finite(p.center, "pulse centre")?;
                    finite(p.impulse, "pulse impulse")?;
                    if !(p.width > 0.0 && p.width.is_finite()) {
                        return Err(Error::arg(format!("pulse width must be positive, got {}", p.width)));
                    }
                }
                let centers: Vec<f64> = pulses.iter().map(|p| p.center).collect();
                strictly_increasing(&centers, "pulse centres")
            }
            FieldProfile::Tabulated { times, values } => {
                if times.len() < 2 || times.len() != values.len() {
                    return Err(Error::arg(format!(
                        "tabulated profile needs ≥ 2 matching samples ({} times, {} values)",
                        times.len(),
                        values.len()
                    )));
                }
                times.iter().chain(values).try_for_each(|x| finite(*x, "sample"))?;
                strictly_increasing(times, "sample times")
            }
        }
    }

    /// Non-fatal observations, e.g. Gaussian pulses that overlap.
    pub fn advisories(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let FieldProfile::GaussianTrain { sigma, centers } = self {
            for w in centers.windows(2) {
                if w[1] - w[0] < 2.0 * GAUSSIAN_TRUNCATION * sigma {
                    out.push(format!(
                        "pulses at {} and {} overlap within ±{GAUSSIAN_TRUNCATION}σ; per-pulse impulse is not exactly π/2",
                        w[0], w[1]
                    ));
                }
            }
        }
        out
    }

    pub fn evaluate(&self, t: f64) -> Result<f64> {
        Ok(match self {
            FieldProfile::Constant { f0 } => *f0,
            FieldProfile::AcDc {
                n,
                delta,
                amplitude,
                omega,
            } => (*n as f64 + delta) * omega + amplitude * (omega * t).cos(),
            FieldProfile::GaussianTrain { sigma, centers } => {
                let a = gaussian_prefactor(*sigma);
                centers.iter().map(|c| a * (-((t - c) / sigma).powi(2)).exp()).sum()
            }
            FieldProfile::SawtoothTrain { pulses } => pulses.iter().map(|p| p.value(t)).sum(),
            FieldProfile::Tabulated { times, values } => {
                let i = locate(times, t)?;
                let w = (t - times[i]) / (times[i + 1] - times[i]);
                values[i] + w * (values[i + 1] - values[i])
            }
        })
    }

    /// Antiderivative with an arbitrary but fixed origin.
    fn antiderivative(&self, t: f64) -> Result<f64> {
        Ok(match self {
            FieldProfile::Constant { f0 } => f0 * t,
            FieldProfile::AcDc {
                n,
                delta,
                amplitude,
                omega,
            } => (*n as f64 + delta) * omega * t + amplitude / omega * (omega * t).sin(),
            FieldProfile::GaussianTrain { sigma, centers } => centers
                .iter()
                .map(|c| {
                    let x = ((t - c) / sigma).clamp(-GAUSSIAN_TRUNCATION, GAUSSIAN_TRUNCATION);
                    0.25 * PI * (1.0 + libm::erf(x))
                })
                .sum(),
            FieldProfile::SawtoothTrain { pulses } => pulses.iter().map(|p| p.cumulative(t)).sum(),
            FieldProfile::Tabulated { times, values } => {
                let i = locate(times, t)?;
                let mut acc = 0.0;
                for k in 0..i {
                    acc += 0.5 * (values[k] + values[k + 1]) * (times[k + 1] - times[k]);
                }
                let dt = t - times[i];
                let slope = (values[i + 1] - values[i]) / (times[i + 1] - times[i]);
                acc + values[i] * dt + 0.5 * slope * dt * dt
            }
        })
    }

    /// `I(t′,t) = ∫_t^{t′} F(s) ds`, closed form for every variant.
    pub fn impulse(&self, t: f64, t_prime: f64) -> Result<f64> {
        if t_prime < t {
            return Err(Error::arg(format!("impulse needs t′ ≥ t, got [{t}, {t_prime}]")));
        }
        Ok(self.antiderivative(t_prime)? - self.antiderivative(t)?)
    }

    /// Signed impulse, valid for either ordering of the endpoints.
    pub(crate) fn impulse_signed(&self, from: f64, to: f64) -> Result<f64> {
        Ok(self.antiderivative(to)? - self.antiderivative(from)?)
    }

    /// Per-pulse (centre, impulse) for pulse trains; `None` otherwise.
    pub fn pulse_impulses(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            FieldProfile::GaussianTrain { centers, .. } => Some(centers.iter().map(|&c| (c, 0.5 * PI)).collect()),
            FieldProfile::SawtoothTrain { pulses } => Some(pulses.iter().map(|p| (p.center, p.impulse)).collect()),
            _ => None,
        }
    }

    /// Panel length fine enough to resolve the profile's structure.
    pub(crate) fn feature_scale(&self) -> f64 {
        let base = AdaptiveSimpson::default().max_panel;
        match self {
            FieldProfile::GaussianTrain { sigma, .. } => base.min(0.5 * sigma),
            FieldProfile::SawtoothTrain { pulses } => pulses.iter().fold(base, |m, p| m.min(0.25 * p.width)),
            FieldProfile::Tabulated { times, .. } => times.windows(2).fold(base, |m, w| m.min(w[1] - w[0])),
            _ => base,
        }
    }
}

/// Prefactor that gives each Gaussian pulse the impulse π/2.
pub fn gaussian_prefactor(sigma: f64) -> f64 {
    PI.sqrt() / (2.0 * sigma)
}

fn strictly_increasing(xs: &[f64], what: &str) -> Result<()> {
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::arg(format!("{what} must be strictly increasing")));
    }
    Ok(())
}

/// Index `i` with `times[i] ≤ t ≤ times[i+1]`.
fn locate(times: &[f64], t: f64) -> Result<usize> {
    let (start, end) = (times[0], times[times.len() - 1]);
    if !(t >= start && t <= end) {
        return Err(Error::Domain { t, start, end });
    }
    let i = times.partition_point(|&x| x <= t);
    Ok(i.saturating_sub(1).min(times.len() - 2))
}

/// Flux profile `φ(t) = 2πΦ(t)/N` threading a ring.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", content = "profile", rename_all = "snake_case")]
pub enum FluxProfile {
    /// The profile's value is φ(t) itself.
    Direct(FieldProfile),
    /// φ(t) = −I(t, 0): the flux equivalent to a chain driven by the field.
    FromField(FieldProfile),
}

impl FluxProfile {
    pub fn from_field(field: FieldProfile) -> Self {
        FluxProfile::FromField(field)
    }

    /// Static flux of `quanta` flux quanta through an `sites`-site ring.
    pub fn static_quanta(quanta: f64, sites: usize) -> Self {
        FluxProfile::Direct(FieldProfile::constant(2.0 * PI * quanta / sites as f64))
    }

    /// φ(t) = φ_A sin(ωt), the flux image of an AC field with F_A = −φ_A ω.
    pub fn sinusoidal(phi_amplitude: f64, omega: f64) -> Result<Self> {
        Ok(FluxProfile::FromField(FieldProfile::ac_dc(0, 0.0, -phi_amplitude * omega, omega)?))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FluxProfile::Direct(p) | FluxProfile::FromField(p) => p.validate(),
        }
    }

    pub fn phi(&self, t: f64) -> Result<f64> {
        match self {
            FluxProfile::Direct(p) => p.evaluate(t),
            FluxProfile::FromField(f) => Ok(-f.impulse_signed(0.0, t)?),
        }
    }

    fn feature_scale(&self) -> f64 {
        match self {
            FluxProfile::Direct(p) | FluxProfile::FromField(p) => p.feature_scale(),
        }
    }
}

/// What drives the lattice: a force on a chain or a flux through a ring.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Drive {
    Field(FieldProfile),
    Flux(FluxProfile),
}

impl Drive {
    pub fn validate(&self) -> Result<()> {
        match self {
            Drive::Field(f) => f.validate(),
            Drive::Flux(f) => f.validate(),
        }
    }

    fn feature_scale(&self) -> f64 {
        match self {
            Drive::Field(f) => f.feature_scale(),
            Drive::Flux(f) => f.feature_scale(),
        }
    }

    /// Phase `θ(s)` whose exponential `e^{−iθ}` is integrated into `u − iv`
    /// over `[t, ·]`: the impulse `I(s, t)` for a chain, `−φ(s)` for a ring.
    fn inner_phase(&self, t: f64, s: f64) -> Result<f64> {
        match self {
            Drive::Field(f) => f.impulse_signed(t, s),
            Drive::Flux(f) => Ok(-f.phi(s)?),
        }
    }

    /// Impulse over `[t, t′]`; for a flux this is the equivalent `−Δφ`.
    pub fn impulse(&self, t: f64, t_prime: f64) -> Result<f64> {
        match self {
            Drive::Field(f) => f.impulse(t, t_prime),
            Drive::Flux(f) => {
                if t_prime < t {
                    return Err(Error::arg(format!("impulse needs t′ ≥ t, got [{t}, {t_prime}]")));
                }
                Ok(f.phi(t)? - f.phi(t_prime)?)
            }
        }
    }
}

/// Time integrals over one interval `[t, t′]`.
///
/// For a ring the pair is built from `−φ`, i.e. `u = ∫cos φ`, `v = −∫sin φ`,
/// so that `cos k·u + sin k·v = ∫cos(k + φ)` holds for both geometries and a
/// flux `φ = −I` yields exactly the chain's integrals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldIntegrals {
    pub u: f64,
    pub v: f64,
    /// `arg(u − iv)` in (−π, π].
    pub phase_shift: f64,
    pub impulse: f64,
    /// `J √(u² + v²) / (t′ − t)`
    pub effective_hopping: f64,
    pub duration: f64,
}

impl FieldIntegrals {
    fn assemble(w: Complex64, impulse: f64, duration: f64, hopping: f64) -> Self {
        let (u, v) = (w.re, -w.im);
        let mut phase_shift = (-v).atan2(u);
        if phase_shift <= -PI {
            phase_shift = PI;
        }
        FieldIntegrals {
            u,
            v,
            phase_shift,
            impulse,
            effective_hopping: hopping * u.hypot(v) / duration,
            duration,
        }
    }

    /// `f_k = ∫cos(k − I)` (chain) or `∫cos(k + φ)` (ring).
    pub fn dispersion_integral(&self, k: f64) -> f64 {
        self.u * k.cos() + self.v * k.sin()
    }

    /// Interval that has not started yet: `u = v = 0`.
    pub fn empty() -> Self {
        FieldIntegrals {
            u: 0.0,
            v: 0.0,
            phase_shift: 0.0,
            impulse: 0.0,
            effective_hopping: 0.0,
            duration: 0.0,
        }
    }
}

fn quadrature_for(drive: &Drive) -> AdaptiveSimpson {
    AdaptiveSimpson::default().with_max_panel(drive.feature_scale())
}

/// `u`, `v`, phase shift, impulse and effective hopping over `[t, t′]`.
pub fn field_integrals(drive: &Drive, t: f64, t_prime: f64, hopping: f64) -> Result<FieldIntegrals> {
    if !(t_prime > t) {
        return Err(Error::arg(format!("field integrals need t′ > t, got [{t}, {t_prime}]")));
    }
    let q = quadrature_for(drive);
    let w: Complex64 = integrate_phase(&q, drive, t, t, t_prime)?;
    let impulse = drive.impulse(t, t_prime)?;
    Ok(FieldIntegrals::assemble(w, impulse, t_prime - t, hopping))
}

fn integrate_phase(q: &AdaptiveSimpson, drive: &Drive, origin: f64, a: f64, b: f64) -> Result<Complex64> {
    // The closure cannot return errors; probe the endpoints so that domain
    // problems surface as errors instead of NaN.
    drive.inner_phase(origin, a)?;
    drive.inner_phase(origin, b)?;
    q.integrate(
        |s| {
            let theta = drive.inner_phase(origin, s).unwrap_or(f64::NAN);
            Complex64::from_polar(1.0, -theta)
        },
        a,
        b,
    )
}

/// Integrals over `[times[0], times[i]]` for every `i`, accumulated piece by
/// piece. Entry 0 is [`FieldIntegrals::empty`].
pub fn field_integrals_series(drive: &Drive, times: &[f64], hopping: f64) -> Result<Vec<FieldIntegrals>> {
    if times.is_empty() {
        return Ok(Vec::new());
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::arg("sample times must be strictly increasing"));
    }
    let q = quadrature_for(drive);
    let t0 = times[0];
    let mut w = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(times.len());
    out.push(FieldIntegrals::empty());
    for pair in times.windows(2) {
        w += integrate_phase(&q, drive, t0, pair[0], pair[1])?;
        out.push(FieldIntegrals::assemble(w, drive.impulse(t0, pair[1])?, pair[1] - t0, hopping));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn evaluate_examples() {
        assert_eq!(FieldProfile::constant(0.5).evaluate(3.0).unwrap(), 0.5);
        let acdc = FieldProfile::ac_dc(1, 0.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(acdc.evaluate(0.0).unwrap(), 2.0, epsilon = 1e-15);
        let g = FieldProfile::gaussian_train(0.886, vec![10.0]).unwrap();
        // √π / (2·0.886)
        assert_abs_diff_eq!(g.evaluate(10.0).unwrap(), 1.000_256_123_535_844, epsilon = 1e-12);
    }

    #[test]
    fn tabulated_domain() {
        let tab = FieldProfile::tabulated(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert_abs_diff_eq!(tab.evaluate(2.0).unwrap(), 1.0, epsilon = 1e-15);
        assert!(matches!(tab.evaluate(3.5), Err(Error::Domain { .. })));
        assert!(matches!(tab.evaluate(-0.1), Err(Error::Domain { .. })));
        // trapezoid area: 1 + 2
        assert_abs_diff_eq!(tab.impulse(0.0, 3.0).unwrap(), 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(tab.impulse(0.5, 2.0).unwrap(), 0.75 + 1.5, epsilon = 1e-14);
        assert!(FieldProfile::tabulated(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(FieldProfile::tabulated(vec![0.0], vec![1.0]).is_err());
    }

    #[test]
    fn validation() {
        assert!(FieldProfile::ac_dc(1, 0.0, 1.0, 0.0).is_err());
        assert!(FieldProfile::gaussian_train(0.0, vec![1.0]).is_err());
        assert!(FieldProfile::gaussian_train(1.0, vec![2.0, 1.0]).is_err());
        let overlapping = FieldProfile::gaussian_train(1.0, vec![0.0, 3.0]).unwrap();
        assert_eq!(overlapping.advisories().len(), 1);
        let ok = FieldProfile::gaussian_train(0.886, vec![20.0, 40.0]).unwrap();
        assert!(ok.advisories().is_empty());
    }

    #[test]
    fn impulse_examples() {
        let c = FieldProfile::constant(0.2);
        assert_abs_diff_eq!(c.impulse(0.0, 10.0 * PI).unwrap(), 2.0 * PI, epsilon = 1e-13);
        let acdc = FieldProfile::ac_dc(1, 0.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(acdc.impulse(0.0, 2.0 * PI).unwrap(), 2.0 * PI, epsilon = 1e-13);
        let g = FieldProfile::gaussian_train(0.886, vec![10.0]).unwrap();
        assert_abs_diff_eq!(g.impulse(0.0, 20.0).unwrap(), 0.5 * PI, epsilon = 1e-15);
        assert!(c.impulse(1.0, 0.0).is_err());
    }

    #[test]
    fn closed_form_impulses_match_quadrature() {
        let profiles = vec![
            FieldProfile::ac_dc(2, 0.13, 1.7, 0.9).unwrap(),
            FieldProfile::gaussian_train(0.886, vec![2.0, 5.5]).unwrap(),
            FieldProfile::sawtooth_train(vec![
                SawtoothPulse { center: 2.0, width: 1.3, impulse: 0.5 * PI },
                SawtoothPulse { center: 5.0, width: 2.0, impulse: -1.0 },
            ])
            .unwrap(),
            FieldProfile::tabulated(vec![0.0, 0.7, 2.0, 4.5, 8.0], vec![0.3, -1.0, 0.4, 2.0, 0.0]).unwrap(),
        ];
        let q = AdaptiveSimpson::default().with_max_panel(0.05);
        for p in profiles {
            for (a, b) in [(0.0, 8.0), (1.1, 5.3), (2.0, 2.4)] {
                let num: f64 = q.integrate(|t| p.evaluate(t).unwrap(), a, b).unwrap();
                assert_abs_diff_eq!(p.impulse(a, b).unwrap(), num, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn sawtooth_peak_matches_area() {
        let p = SawtoothPulse { center: 0.0, width: 2.0, impulse: 0.5 * PI };
        assert_abs_diff_eq!(p.peak(), 0.5 * PI, epsilon = 1e-15);
        assert_abs_diff_eq!(p.cumulative(0.0), 0.25 * PI, epsilon = 1e-15);
        assert_abs_diff_eq!(p.cumulative(5.0), 0.5 * PI, epsilon = 1e-15);
    }

    #[test]
    fn zero_field_integrals() {
        let d = Drive::Field(FieldProfile::constant(0.0));
        let fi = field_integrals(&d, 1.0, 4.5, 1.3).unwrap();
        assert_abs_diff_eq!(fi.u, 3.5, epsilon = 1e-12);
        assert_abs_diff_eq!(fi.v, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fi.phase_shift, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fi.effective_hopping, 1.3, epsilon = 1e-12);
    }

    #[test]
    fn constant_field_half_period() {
        // u = ∫cos t = 0, v = ∫sin t = 2 on [0, π]
        let d = Drive::Field(FieldProfile::constant(1.0));
        let fi = field_integrals(&d, 0.0, PI, 1.0).unwrap();
        assert_abs_diff_eq!(fi.u, 0.0, epsilon = 1e-11);
        assert_abs_diff_eq!(fi.v, 2.0, epsilon = 1e-11);
        assert_abs_diff_eq!(fi.phase_shift, -0.5 * PI, epsilon = 1e-11);
        assert_abs_diff_eq!(fi.effective_hopping, 2.0 / PI, epsilon = 1e-11);
        assert_abs_diff_eq!(fi.impulse, PI, epsilon = 1e-14);
        assert!(field_integrals(&d, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn ac_field_at_bessel_root_over_one_period() {
        // ∫₀^τ cos(z sin ωt) dt = τ 𝒥₀(z); at the first root it vanishes.
        let z = crate::bessel::bessel_j0_root(1).unwrap();
        let tau = 2.0 * PI;
        let d = Drive::Field(FieldProfile::ac_dc(0, 0.0, z, 1.0).unwrap());
        let fi = field_integrals(&d, 0.0, tau, 1.0).unwrap();
        assert_abs_diff_eq!(fi.u, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(fi.v, 0.0, epsilon = 1e-9);
        assert!(fi.effective_hopping < 1e-9);
    }

    #[test]
    fn ac_dc_modulus_is_bessel() {
        for n in 0..4 {
            for (amp, omega) in [(1.0, 1.0), (2.5, 1.3), (0.7, 0.4)] {
                let d = Drive::Field(FieldProfile::ac_dc(n, 0.0, amp, omega).unwrap());
                let tau = 2.0 * PI / omega;
                let fi = field_integrals(&d, 0.0, tau, 1.0).unwrap();
                let jn = crate::bessel::bessel_jn(n as u32, amp / omega).unwrap();
                assert_abs_diff_eq!(fi.u.hypot(fi.v), tau * jn.abs(), epsilon = 1e-9);
                assert_abs_diff_eq!(fi.effective_hopping, jn.abs(), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn ring_integrals_of_constant_flux() {
        let phi0 = 0.7;
        let d = Drive::Flux(FluxProfile::Direct(FieldProfile::constant(phi0)));
        let fi = field_integrals(&d, 0.0, 2.0, 1.0).unwrap();
        assert_abs_diff_eq!(fi.phase_shift, phi0, epsilon = 1e-12);
        assert_abs_diff_eq!(fi.effective_hopping, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fi.impulse, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn flux_from_field_matches_chain_integrals() {
        let f = FieldProfile::ac_dc(1, 0.05, 1.0, 1.0).unwrap();
        let chain = field_integrals(&Drive::Field(f.clone()), 0.0, 7.3, 1.0).unwrap();
        let ring = field_integrals(&Drive::Flux(FluxProfile::from_field(f)), 0.0, 7.3, 1.0).unwrap();
        assert_abs_diff_eq!(chain.u, ring.u, epsilon = 1e-13);
        assert_abs_diff_eq!(chain.v, ring.v, epsilon = 1e-13);
        assert_abs_diff_eq!(chain.impulse, ring.impulse, epsilon = 1e-13);
    }

    #[test]
    fn sinusoidal_flux() {
        let f = FluxProfile::sinusoidal(0.8, 2.0).unwrap();
        assert_abs_diff_eq!(f.phi(0.3).unwrap(), 0.8 * (0.6f64).sin(), epsilon = 1e-14);
        let s = FluxProfile::static_quanta(50.0, 200);
        assert_abs_diff_eq!(s.phi(1.0).unwrap(), 0.5 * PI, epsilon = 1e-15);
    }

    #[test]
    fn series_matches_direct_integrals() {
        let d = Drive::Field(FieldProfile::gaussian_train(0.886, vec![3.0, 6.0]).unwrap());
        let times: Vec<f64> = (0..=20).map(|i| 0.5 * i as f64).collect();
        let series = field_integrals_series(&d, &times, 1.0).unwrap();
        for (t, fi) in times.iter().zip(&series).skip(1) {
            let direct = field_integrals(&d, 0.0, *t, 1.0).unwrap();
            assert_abs_diff_eq!(fi.u, direct.u, epsilon = 1e-10);
            assert_abs_diff_eq!(fi.v, direct.v, epsilon = 1e-10);
            assert_abs_diff_eq!(fi.impulse, direct.impulse, epsilon = 1e-13);
        }
    }

    #[test]
    fn out_of_domain_tabulated_is_an_error() {
        let d = Drive::Field(FieldProfile::tabulated(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap());
        assert!(matches!(field_integrals(&d, 0.0, 2.0, 1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn config_round_trip() {
        let json = r#"{"type":"ac_dc","n":1,"delta":0.02,"f_a":1.0,"omega":1.0}"#;
        let p: FieldProfile = serde_json::from_str(json).unwrap();
        assert_eq!(p, FieldProfile::ac_dc(1, 0.02, 1.0, 1.0).unwrap());
        let flux: FluxProfile =
            serde_json::from_str(r#"{"source":"direct","profile":{"type":"constant","f0":0.3}}"#).unwrap();
        assert_eq!(flux.phi(5.0).unwrap(), 0.3);
    }

    fn arb_profile() -> impl Strategy<Value = FieldProfile> {
        prop_oneof![
            (-2.0f64..2.0).prop_map(FieldProfile::constant),
            (0i32..4, -0.1f64..0.1, 0.0f64..3.0, 0.3f64..3.0)
                .prop_map(|(n, d, a, w)| FieldProfile::ac_dc(n, d, a, w).unwrap()),
            (0.3f64..1.5, proptest::collection::vec(0.0f64..10.0, 1..4)).prop_map(|(s, mut c)| {
                c.sort_by(f64::total_cmp);
                c.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
                FieldProfile::gaussian_train(s, c).unwrap()
            }),
            proptest::collection::vec(-1.5f64..1.5, 3..12).prop_map(|v| {
                let times = (0..v.len()).map(|i| i as f64 * 10.0 / (v.len() - 1) as f64).collect();
                FieldProfile::tabulated(times, v).unwrap()
            }),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn dispersion_integral_factorizes(p in arb_profile(), t1 in 0.1f64..10.0, k in -PI..PI) {
            let fi = field_integrals(&Drive::Field(p), 0.0, t1, 1.0).unwrap();
            let lhs = fi.dispersion_integral(k);
            let rhs = fi.u.hypot(fi.v) * (k + fi.phase_shift).cos();
            prop_assert!((lhs - rhs).abs() < 1e-12);
            prop_assert!(fi.phase_shift > -PI && fi.phase_shift <= PI);
            prop_assert!(fi.u.hypot(fi.v) <= t1 * (1.0 + 1e-12));
            prop_assert!(fi.effective_hopping >= 0.0 && fi.effective_hopping <= 1.0 + 1e-12);
        }

        #[test]
        fn impulse_is_additive(p in arb_profile(), a in 0.0f64..3.0, b in 3.0f64..6.0, c in 6.0f64..10.0) {
            let whole = p.impulse(a, c).unwrap();
            let parts = p.impulse(a, b).unwrap() + p.impulse(b, c).unwrap();
            prop_assert!((whole - parts).abs() < 1e-12);
        }

        #[test]
        fn flux_from_field_derivative_is_minus_field(p in arb_profile(), t in 0.5f64..9.5) {
            let flux = FluxProfile::from_field(p.clone());
            prop_assert!(flux.phi(0.0).unwrap().abs() < 1e-15);
            let h = 1e-4;
            let deriv = (flux.phi(t + h).unwrap() - flux.phi(t - h).unwrap()) / (2.0 * h);
            // tabulated profiles have slope kinks at the knots
            if !matches!(p, FieldProfile::Tabulated { .. }) {
                prop_assert!((deriv + p.evaluate(t).unwrap()).abs() < 1e-6);
            }
        }
    }
}
