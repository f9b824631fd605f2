//! Closed-form propagators, Gaussian wave-packet analytics and phenomenon
//! predictors.
//!
//! Chain propagation uses the gauge `ψ_j = e^{−iI(s,t)(j−offset)} φ_j`: in
//! that frame every momentum mode only picks up the phase
//! `exp(i2J f_k)`, `f_k = u cos k + v sin k`, and the impulse reappears as
//! an exact real-space phase ramp, i.e. a rigid momentum shift `k → k − I`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bessel::bessel_jn;
use crate::error::{Error, Result};
use crate::fields::{field_integrals, field_integrals_series, Drive, FieldIntegrals, FieldProfile, FluxProfile};
use crate::lattice::{check_len, dft_from_momentum, dft_to_momentum, wrap_momentum, LatticeKind, LatticeSpec, StateVector};
use crate::numeric::{default_edge_margin, edge_occupancy};

/// Packets with `alpha` at or below this are in the wide-packet regime.
pub const WIDE_PACKET_ALPHA: f64 = 0.2;
/// Largest edge occupancy for which the finite chain stands in for the
/// infinite one.
pub const EDGE_PRECONDITION: f64 = 1e-8;
/// Samples per drive period when searching for the largest shaking.
pub const SHAKING_SAMPLES: usize = 2048;
/// `|𝒥_n|` below this is reported as dynamic localization.
pub const LOCALIZATION_THRESHOLD: f64 = 1e-6;

/// Gaussian wave packet `c_k ∝ exp(−(k−k0)²/α² − i N_A k)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacketParams {
    pub k0: f64,
    /// Central position `N_A`, as a storage index.
    #[serde(rename = "n_a")]
    pub center: f64,
    pub alpha: f64,
}

impl PacketParams {
    pub fn new(k0: f64, center: f64, alpha: f64) -> Result<Self> {
        let p = PacketParams { k0, center, alpha };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::arg(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.k0.is_finite() && self.center.is_finite()) {
            return Err(Error::arg("packet momentum and center must be finite"));
        }
        Ok(())
    }

    pub fn is_wide(&self) -> bool {
        self.alpha <= WIDE_PACKET_ALPHA
    }

    /// Spatial standard deviation of `|ψ|²`, `1/α`.
    pub fn spatial_width(&self) -> f64 {
        1.0 / self.alpha
    }

    /// Normalization Λ on the lattice's momentum grid.
    pub fn normalization(&self, lattice: &LatticeSpec) -> f64 {
        let s: f64 = lattice
            .momentum_grid()
            .values()
            .iter()
            .map(|&k| (-2.0 * (wrap_momentum(k - self.k0) / self.alpha).powi(2)).exp())
            .sum();
        1.0 / s.sqrt()
    }
}

/// Wide-packet image of a GWP at time t.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolvedPacket {
    pub time: f64,
    /// `k0 − I(t)` for a chain, `k0` for a ring, in (−π, π].
    pub k_center: f64,
    /// `N_A + D(t)`.
    pub center: f64,
    pub displacement: f64,
    pub global_phase: f64,
    pub alpha: f64,
    pub group_velocity: f64,
}

/// Build the GWP on the lattice's momentum grid.
///
/// `k − k0` is taken on its representative in (−π, π], so packets near the
/// zone edge are not cut in half.
pub fn gwp_build(params: &PacketParams, lattice: &LatticeSpec) -> Result<StateVector> {
    params.validate()?;
    lattice.validate()?;
    let n = lattice.sites as f64;
    if params.spatial_width() > n / 4.0 {
        return Err(Error::arg(format!(
            "packet width 1/alpha = {} does not fit on {} sites",
            params.spatial_width(),
            lattice.sites
        )));
    }
    if !(0.0..n).contains(&params.center) {
        return Err(Error::arg(format!("packet center {} outside the lattice", params.center)));
    }
    let lambda = params.normalization(lattice);
    let coeffs: Vec<Complex64> = lattice
        .momentum_grid()
        .values()
        .iter()
        .map(|&k| {
            let dk = wrap_momentum(k - params.k0);
            let amp = lambda * (-(dk / params.alpha).powi(2)).exp();
            Complex64::from_polar(amp, -params.center * (params.k0 + dk))
        })
        .collect();
    let psi = dft_from_momentum(&coeffs, lattice)?;
    StateVector::normalized(psi.into_amplitudes())
}

fn evolved(params: &PacketParams, drive: &Drive, hopping: f64, t: f64, fi: &FieldIntegrals) -> Result<EvolvedPacket> {
    let (s, c) = params.k0.sin_cos();
    // 2J_eff t sin(k0 + φ̃) and 2J_eff t cos(k0 + φ̃)
    let d = 2.0 * hopping * (fi.u * s - fi.v * c);
    let e = 2.0 * hopping * (fi.u * c + fi.v * s);
    let (k_center, global_phase) = match drive {
        Drive::Field(_) => (wrap_momentum(params.k0 - fi.impulse), e - params.center * fi.impulse),
        Drive::Flux(_) => (wrap_momentum(params.k0), e + params.k0 * d),
    };
    Ok(EvolvedPacket {
        time: t,
        k_center,
        center: params.center + d,
        displacement: d,
        global_phase,
        alpha: params.alpha,
        group_velocity: group_velocity(params, drive, hopping, t)?,
    })
}

/// Center, momentum and phase of the packet at time `t ≥ 0` (evolved from 0).
pub fn gwp_evolve_params(params: &PacketParams, drive: &Drive, hopping: f64, t: f64) -> Result<EvolvedPacket> {
    if !(t >= 0.0) {
        return Err(Error::arg(format!("packets evolve from t = 0, got t = {t}")));
    }
    let fi = if t == 0.0 { FieldIntegrals::empty() } else { field_integrals(drive, 0.0, t, hopping)? };
    evolved(params, drive, hopping, t, &fi)
}

/// [`gwp_evolve_params`] at many increasing times, sharing one cumulative
/// quadrature pass.
pub fn gwp_trajectory(params: &PacketParams, drive: &Drive, hopping: f64, times: &[f64]) -> Result<Vec<EvolvedPacket>> {
    if times.is_empty() {
        return Ok(Vec::new());
    }
    if !(times[0] >= 0.0) {
        return Err(Error::arg("packet trajectories start at t ≥ 0"));
    }
    let lead = times[0] > 0.0;
    let mut all = Vec::with_capacity(times.len() + 1);
    if lead {
        all.push(0.0);
    }
    all.extend_from_slice(times);
    let series = field_integrals_series(drive, &all, hopping)?;
    all.iter()
        .zip(&series)
        .skip(lead as usize)
        .map(|(&t, fi)| evolved(params, drive, hopping, t, fi))
        .collect()
}

/// `2J sin(k0 − I(t))` on a chain, `2J sin(k0 + φ(t))` on a ring.
pub fn group_velocity(params: &PacketParams, drive: &Drive, hopping: f64, t: f64) -> Result<f64> {
    let k = match drive {
        Drive::Field(f) => params.k0 - f.impulse_signed(0.0, t)?,
        Drive::Flux(f) => params.k0 + f.phi(t)?,
    };
    Ok(2.0 * hopping * k.sin())
}

/// Per-mode phases `exp(i2J f_k(t′,t))` of the ring propagator, in
/// momentum-grid order.
pub fn ring_propagator_phases(flux: &FluxProfile, lattice: &LatticeSpec, t: f64, t_prime: f64) -> Result<Vec<Complex64>> {
    if lattice.kind != LatticeKind::Ring {
        return Err(Error::arg("ring propagator needs a ring lattice"));
    }
    mode_phases(&Drive::Flux(flux.clone()), lattice, t, t_prime).map(|(p, _)| p)
}

fn mode_phases(drive: &Drive, lattice: &LatticeSpec, t: f64, t_prime: f64) -> Result<(Vec<Complex64>, f64)> {
    lattice.validate()?;
    if t_prime < t {
        return Err(Error::arg(format!("propagation runs forward, got [{t}, {t_prime}]")));
    }
    let fi = if t_prime == t { FieldIntegrals::empty() } else { field_integrals(drive, t, t_prime, lattice.hopping)? };
    let phases = lattice
        .momentum_grid()
        .values()
        .iter()
        .map(|&k| Complex64::from_polar(1.0, 2.0 * lattice.hopping * fi.dispersion_integral(k)))
        .collect();
    Ok((phases, fi.impulse))
}

fn apply_phases(state: &StateVector, lattice: &LatticeSpec, phases: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut c = dft_to_momentum(state, lattice)?;
    c.iter_mut().zip(phases).for_each(|(a, p)| *a *= p);
    Ok(dft_from_momentum(&c, lattice)?.into_amplitudes())
}

/// Exact ring evolution from `t` to `t′`.
pub fn ring_propagate_state(
    state: &StateVector,
    flux: &FluxProfile,
    lattice: &LatticeSpec,
    t: f64,
    t_prime: f64,
) -> Result<StateVector> {
    check_len(state, lattice)?;
    let phases = ring_propagator_phases(flux, lattice, t, t_prime)?;
    Ok(StateVector::from_evolved(apply_phases(state, lattice, &phases)?))
}

/// Infinite-chain evolution from `t` to `t′`, represented on the lattice.
///
/// Requires the state to stay clear of the open ends (edge occupancy below
/// [`EDGE_PRECONDITION`]); otherwise the finite chain is not a faithful
/// window on the infinite one.
pub fn chain_propagate_state(
    state: &StateVector,
    field: &FieldProfile,
    lattice: &LatticeSpec,
    t: f64,
    t_prime: f64,
) -> Result<StateVector> {
    if lattice.kind != LatticeKind::Chain {
        return Err(Error::arg("chain propagator needs a chain lattice"));
    }
    check_len(state, lattice)?;
    let occupancy = edge_occupancy(&state.probabilities(), default_edge_margin(lattice.sites));
    if occupancy >= EDGE_PRECONDITION {
        return Err(Error::EdgeOccupancy { occupancy });
    }
    let (phases, impulse) = mode_phases(&Drive::Field(field.clone()), lattice, t, t_prime)?;
    let mut psi = apply_phases(state, lattice, &phases)?;
    for (j, a) in psi.iter_mut().enumerate() {
        *a *= Complex64::from_polar(1.0, -impulse * lattice.position(j));
    }
    Ok(StateVector::from_evolved(psi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhenomenonKind {
    #[serde(rename = "BO")]
    BlochOscillation,
    #[serde(rename = "BT")]
    BlochTranslation,
    #[serde(rename = "SBO")]
    SuperBloch,
    #[serde(rename = "DL")]
    DynamicLocalization,
}

impl PhenomenonKind {
    pub fn label(self) -> &'static str {
        match self {
            PhenomenonKind::BlochOscillation => "BO",
            PhenomenonKind::BlochTranslation => "BT",
            PhenomenonKind::SuperBloch => "SBO",
            PhenomenonKind::DynamicLocalization => "DL",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhenomenonPrediction {
    pub kind: PhenomenonKind,
    /// BO/SBO: oscillation period. BT/DL: drive period `2π/ω`.
    pub period: f64,
    /// BO/SBO: peak-to-peak excursion. BT/DL: largest shaking `|D − D̄|`.
    pub extent: f64,
    /// Long-time mean velocity; zero for oscillating kinds.
    pub drift_velocity: f64,
    pub effective_hopping: f64,
    /// Static force of the (effective) Bloch oscillation: `F0` or `δω`.
    pub effective_force: Option<f64>,
    pub shaking_max: Option<f64>,
    pub k0: f64,
    /// `J` (BO) or `J(−1)ⁿ𝒥_n(F_A/ω)` (BT, SBO, DL).
    pub signed_hopping: f64,
}

impl PhenomenonPrediction {
    /// Mean displacement `D̄(t)`: exact `D(t)` for BO, the averaged
    /// trajectory otherwise.
    pub fn mean_displacement(&self, t: f64) -> f64 {
        match self.effective_force {
            Some(f) => 2.0 * self.signed_hopping / f * ((self.k0 - f * t).cos() - self.k0.cos()),
            None => self.drift_velocity * t,
        }
    }

    /// `dD̄/dt`.
    pub fn mean_velocity(&self, t: f64) -> f64 {
        match self.effective_force {
            Some(f) => 2.0 * self.signed_hopping * (self.k0 - f * t).sin(),
            None => self.drift_velocity,
        }
    }
}

/// `(−1)ⁿ𝒥_n(z)`, for any integer n (using `𝒥_{−n} = (−1)ⁿ𝒥_n`).
pub fn signed_bessel(n: i32, z: f64) -> Result<f64> {
    let jn = bessel_jn(n.unsigned_abs(), z)?;
    // (−1)ⁿ𝒥_n = 𝒥_{|n|} for n < 0 and (−1)ⁿ𝒥_n for n ≥ 0
    Ok(if n >= 0 && n % 2 != 0 { -jn } else { jn })
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::arg(format!("{name} must be positive, got {x}")));
    }
    Ok(())
}

pub fn predict_bloch_oscillation(f0: f64, hopping: f64, k0: f64) -> Result<PhenomenonPrediction> {
    check_positive("hopping", hopping)?;
    if f0 == 0.0 || !f0.is_finite() {
        return Err(Error::arg("Bloch oscillations need a nonzero static force; F0 = 0 is free motion"));
    }
    Ok(PhenomenonPrediction {
        kind: PhenomenonKind::BlochOscillation,
        period: 2.0 * PI / f0.abs(),
        extent: 4.0 * hopping / f0.abs(),
        drift_velocity: 0.0,
        effective_hopping: hopping,
        effective_force: Some(f0),
        shaking_max: None,
        k0,
        signed_hopping: hopping,
    })
}

/// Largest `|D(t) − v̄t|` over one drive period of a resonant AC+DC field.
pub fn bt_shaking_max(n: i32, amplitude: f64, omega: f64, hopping: f64, k0: f64) -> Result<f64> {
    let (times, dd) = bt_shaking_profile(n, amplitude, omega, hopping, k0, 1)?;
    debug_assert_eq!(times.len(), dd.len());
    Ok(dd.iter().fold(0.0, |m, x| m.max(x.abs())))
}

/// `ΔD(t) = D(t) − v̄t` sampled at `SHAKING_SAMPLES` points per period over
/// `periods` periods (endpoints included).
pub fn bt_shaking_profile(
    n: i32,
    amplitude: f64,
    omega: f64,
    hopping: f64,
    k0: f64,
    periods: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_positive("omega", omega)?;
    check_positive("hopping", hopping)?;
    let field = FieldProfile::ac_dc(n, 0.0, amplitude, omega)?;
    let drift = 2.0 * hopping * signed_bessel(n, amplitude / omega)? * k0.sin();
    let tau = 2.0 * PI / omega;
    let m = SHAKING_SAMPLES * periods.max(1);
    let times: Vec<f64> = (0..=m).map(|i| tau * i as f64 / SHAKING_SAMPLES as f64).collect();
    let params = PacketParams { k0, center: 0.0, alpha: 0.1 };
    let traj = gwp_trajectory(&params, &Drive::Field(field), hopping, &times)?;
    let dd = traj.iter().map(|p| p.displacement - drift * p.time).collect();
    Ok((times, dd))
}

pub fn predict_bloch_translation(n: i32, amplitude: f64, omega: f64, hopping: f64, k0: f64) -> Result<PhenomenonPrediction> {
    check_positive("omega", omega)?;
    check_positive("hopping", hopping)?;
    let b = signed_bessel(n, amplitude / omega)?;
    let shaking = bt_shaking_max(n, amplitude, omega, hopping, k0)?;
    let kind = if b.abs() < LOCALIZATION_THRESHOLD {
        PhenomenonKind::DynamicLocalization
    } else {
        PhenomenonKind::BlochTranslation
    };
    Ok(PhenomenonPrediction {
        kind,
        period: 2.0 * PI / omega,
        extent: shaking,
        drift_velocity: 2.0 * hopping * b * k0.sin(),
        effective_hopping: hopping * b.abs(),
        effective_force: None,
        shaking_max: Some(shaking),
        k0,
        signed_hopping: hopping * b,
    })
}

pub fn predict_super_bloch(
    n: i32,
    delta: f64,
    amplitude: f64,
    omega: f64,
    hopping: f64,
    k0: f64,
) -> Result<PhenomenonPrediction> {
    check_positive("omega", omega)?;
    check_positive("hopping", hopping)?;
    if delta == 0.0 || !delta.is_finite() {
        return Err(Error::arg("super Bloch oscillations need a nonzero detuning; use predict_bloch_translation"));
    }
    let b = signed_bessel(n, amplitude / omega)?;
    let force = delta * omega;
    Ok(PhenomenonPrediction {
        kind: PhenomenonKind::SuperBloch,
        period: 2.0 * PI / force.abs(),
        extent: 4.0 * hopping * (b / force).abs(),
        drift_velocity: 0.0,
        effective_hopping: hopping * b.abs(),
        effective_force: Some(force),
        shaking_max: None,
        k0,
        signed_hopping: hopping * b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::bessel_j0_root;
    use crate::numeric::central_momentum;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const FIG2_J1: f64 = 0.440_050_585_744_933_5;

    fn chain200() -> LatticeSpec {
        LatticeSpec::chain(200, 1.0).unwrap()
    }

    fn fig2_packet() -> PacketParams {
        PacketParams::new(PI / 2.0, 100.0, 0.1).unwrap()
    }

    #[test]
    fn gwp_is_centered() {
        let lat = chain200();
        let psi = gwp_build(&fig2_packet(), &lat).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-13);
        let p = psi.probabilities();
        assert_abs_diff_eq!(crate::numeric::center(&p), 100.0, epsilon = 1e-9);
        assert_abs_diff_eq!(crate::numeric::width(&p), 10.0, epsilon = 1e-6);
        assert_abs_diff_eq!(central_momentum(&psi, &lat).unwrap(), PI / 2.0, epsilon = 1e-3);
        assert!(fig2_packet().is_wide());
    }

    #[test]
    fn gwp_rejects_oversized_packets() {
        let lat = LatticeSpec::chain(40, 1.0).unwrap();
        assert!(gwp_build(&PacketParams::new(0.0, 20.0, 0.05).unwrap(), &lat).is_err());
        assert!(gwp_build(&PacketParams::new(0.0, 45.0, 0.5).unwrap(), &lat).is_err());
        assert!(PacketParams::new(0.0, 20.0, 0.0).is_err());
    }

    #[test]
    fn free_ring_phases() {
        let lat = LatticeSpec::ring(16, 1.0).unwrap();
        let ph = ring_propagator_phases(&FluxProfile::static_quanta(0.0, 16), &lat, 0.0, 2.5).unwrap();
        for (p, k) in ph.iter().zip(lat.momentum_grid().values()) {
            assert!((p - Complex64::from_polar(1.0, 2.0 * 2.5 * k.cos())).norm() < 1e-12);
        }
        let phi0 = 0.37;
        let ph = ring_propagator_phases(&FluxProfile::Direct(FieldProfile::constant(phi0)), &lat, 1.0, 3.0).unwrap();
        for (p, k) in ph.iter().zip(lat.momentum_grid().values()) {
            assert!((p - Complex64::from_polar(1.0, 2.0 * 2.0 * (k + phi0).cos())).norm() < 1e-12);
        }
    }

    #[test]
    fn sinusoidal_flux_at_bessel_root_freezes() {
        let lat = LatticeSpec::ring(16, 1.0).unwrap();
        let root = bessel_j0_root(1).unwrap();
        let flux = FluxProfile::sinusoidal(root, 1.0).unwrap();
        let ph = ring_propagator_phases(&flux, &lat, 0.0, 2.0 * PI).unwrap();
        assert!(ph.iter().all(|p| (p - 1.0).norm() < 1e-9));
        let fi = field_integrals(&Drive::Flux(flux), 0.0, 2.0 * PI, 1.0).unwrap();
        assert!(fi.effective_hopping < 1e-10);
    }

    #[test]
    fn propagators_are_unitary_and_chain_shifts_momentum() {
        let lat = chain200();
        let psi = gwp_build(&fig2_packet(), &lat).unwrap();
        let field = FieldProfile::ac_dc(1, 0.0, 1.0, 1.0).unwrap();
        let out = chain_propagate_state(&psi, &field, &lat, 0.0, 3.3).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        let impulse = field.impulse(0.0, 3.3).unwrap();
        let k = central_momentum(&out, &lat).unwrap();
        assert!((wrap_momentum(k - (PI / 2.0 - impulse))).abs() < 1e-6);

        let ring = LatticeSpec::ring(200, 1.0).unwrap();
        let out = ring_propagate_state(&psi, &FluxProfile::from_field(field), &ring, 0.0, 3.3).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    /// Discrete-time Fourier transform `N^{-1/2} Σ_j e^{−ikj} ψ_j` at any k.
    fn dtft(psi: &[Complex64], k: f64) -> Complex64 {
        let s: Complex64 = psi.iter().enumerate().map(|(j, a)| a * Complex64::from_polar(1.0, -k * j as f64)).sum();
        s / (psi.len() as f64).sqrt()
    }

    #[test]
    fn chain_shift_is_rigid_pointwise() {
        let lat = chain200();
        let psi = gwp_build(&PacketParams::new(0.4, 100.0, 0.1).unwrap(), &lat).unwrap();
        let field = FieldProfile::gaussian_train(0.886, vec![2.0]).unwrap();
        let out = chain_propagate_state(&psi, &field, &lat, 0.0, 6.0).unwrap();
        let impulse = field.impulse(0.0, 6.0).unwrap();
        let after = dft_to_momentum(&out, &lat).unwrap();
        for (c, &k) in after.iter().zip(lat.momentum_grid().values()) {
            let before = dtft(psi.amplitudes(), k + impulse).norm_sqr();
            assert!((c.norm_sqr() - before).abs() < 1e-10);
        }
    }

    #[test]
    fn chain_propagator_guards_edges() {
        let lat = LatticeSpec::chain(40, 1.0).unwrap();
        let psi = StateVector::site(40, 0).unwrap();
        let err = chain_propagate_state(&psi, &FieldProfile::constant(0.1), &lat, 0.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::EdgeOccupancy { .. }));
        let ring = LatticeSpec::ring(40, 1.0).unwrap();
        assert!(chain_propagate_state(&psi, &FieldProfile::constant(0.1), &ring, 0.0, 1.0).is_err());
    }

    #[test]
    fn evolved_params_examples() {
        let p = fig2_packet();
        let free = gwp_evolve_params(&p, &Drive::Field(FieldProfile::constant(0.0)), 1.0, 7.0).unwrap();
        assert_abs_diff_eq!(free.center, 100.0 + 14.0, epsilon = 1e-10);
        assert_abs_diff_eq!(free.k_center, PI / 2.0, epsilon = 1e-15);

        let f0 = 0.2;
        let q = PacketParams::new(0.3, 100.0, 0.1).unwrap();
        let bo = gwp_evolve_params(&q, &Drive::Field(FieldProfile::constant(f0)), 1.0, 11.0).unwrap();
        let expect = 2.0 / f0 * ((0.3 - f0 * 11.0).cos() - 0.3f64.cos());
        assert_abs_diff_eq!(bo.displacement, expect, epsilon = 1e-9);
        assert_abs_diff_eq!(bo.k_center, wrap_momentum(0.3 - 2.2), epsilon = 1e-12);
        let pred = predict_bloch_oscillation(f0, 1.0, 0.3).unwrap();
        assert_abs_diff_eq!(pred.mean_displacement(11.0), expect, epsilon = 1e-12);

        let bt = Drive::Field(FieldProfile::ac_dc(1, 0.0, 1.0, 1.0).unwrap());
        for m in 1..=3 {
            let t = 2.0 * PI * m as f64;
            let d = gwp_evolve_params(&p, &bt, 1.0, t).unwrap().displacement;
            assert_abs_diff_eq!(d, -2.0 * FIG2_J1 * t, epsilon = 1e-8);
        }
    }

    #[test]
    fn group_velocity_examples() {
        let p = fig2_packet();
        let zero = Drive::Field(FieldProfile::constant(0.0));
        assert_abs_diff_eq!(group_velocity(&p, &zero, 1.0, 3.0).unwrap(), 2.0);
        let f0 = 0.25;
        let bo = Drive::Field(FieldProfile::constant(f0));
        assert_abs_diff_eq!(group_velocity(&p, &bo, 1.0, PI / f0).unwrap(), -2.0, epsilon = 1e-12);
        let pulse = Drive::Field(FieldProfile::gaussian_train(0.886, vec![10.0]).unwrap());
        let q = PacketParams::new(0.0, 100.0, 0.1).unwrap();
        assert_abs_diff_eq!(group_velocity(&q, &pulse, 1.0, 20.0).unwrap(), -2.0, epsilon = 1e-12);
        let ring = Drive::Flux(FluxProfile::Direct(FieldProfile::constant(0.5)));
        assert_abs_diff_eq!(group_velocity(&q, &ring, 1.0, 1.0).unwrap(), 2.0 * 0.5f64.sin());
    }

    #[test]
    fn ring_packet_keeps_momentum() {
        let p = PacketParams::new(1.0, 100.0, 0.1).unwrap();
        let flux = Drive::Flux(FluxProfile::Direct(FieldProfile::constant(0.4)));
        let e = gwp_evolve_params(&p, &flux, 1.0, 5.0).unwrap();
        assert_eq!(e.k_center, 1.0);
        assert_abs_diff_eq!(e.displacement, 2.0 * 5.0 * 1.4f64.sin(), epsilon = 1e-10);
    }

    #[test]
    fn prediction_examples() {
        let bo = predict_bloch_oscillation(0.2, 1.0, PI / 2.0).unwrap();
        assert_abs_diff_eq!(bo.period, 10.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(bo.extent, 20.0, epsilon = 1e-12);
        assert_abs_diff_eq!(predict_bloch_oscillation(2.0 * PI, 1.0, 0.0).unwrap().period, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(predict_bloch_oscillation(0.5, 2.0, 0.0).unwrap().extent, 16.0);
        assert!(predict_bloch_oscillation(0.0, 1.0, 0.0).is_err());

        let bt = predict_bloch_translation(1, 1.0, 1.0, 1.0, PI / 2.0).unwrap();
        assert_eq!(bt.kind, PhenomenonKind::BlochTranslation);
        assert_abs_diff_eq!(bt.drift_velocity, -2.0 * FIG2_J1, epsilon = 1e-12);
        assert_abs_diff_eq!(bt.effective_hopping, FIG2_J1, epsilon = 1e-12);
        assert_abs_diff_eq!(bt.period, 2.0 * PI, epsilon = 1e-15);
        assert!(bt.shaking_max.unwrap() > 0.0);
        assert_eq!(predict_bloch_translation(2, 0.0, 1.0, 1.0, PI / 2.0).unwrap().drift_velocity, 0.0);
        let dl = predict_bloch_translation(0, bessel_j0_root(1).unwrap(), 1.0, 1.0, PI / 2.0).unwrap();
        assert_eq!(dl.kind, PhenomenonKind::DynamicLocalization);
        assert!(dl.drift_velocity.abs() < 1e-11);
        assert!(dl.shaking_max.unwrap() > 0.1);

        let sbo = predict_super_bloch(1, 0.02, 1.0, 1.0, 1.0, PI / 2.0).unwrap();
        assert_abs_diff_eq!(sbo.period, 100.0 * PI, epsilon = 1e-9);
        assert_abs_diff_eq!(sbo.extent, 4.0 * FIG2_J1 / 0.02, epsilon = 1e-9);
        assert_abs_diff_eq!(sbo.effective_force.unwrap(), 0.02, epsilon = 1e-15);
        // the averaged velocity starts at the Bloch-translation drift
        assert_abs_diff_eq!(sbo.mean_velocity(0.0), bt.drift_velocity, epsilon = 1e-12);
        let sbo2 = predict_super_bloch(1, 0.04, 0.5, 0.5, 1.0, PI / 2.0).unwrap();
        assert_abs_diff_eq!(sbo2.period, sbo.period, epsilon = 1e-9);
        assert!(predict_super_bloch(1, 0.0, 1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn mean_displacement_differentiates_to_mean_velocity() {
        let sbo = predict_super_bloch(1, 0.02, 1.0, 1.0, 1.0, 0.7).unwrap();
        let h = 1e-4;
        for t in [0.0, 50.0, 123.0, 300.0] {
            let fd = (sbo.mean_displacement(t + h) - sbo.mean_displacement(t - h)) / (2.0 * h);
            assert_abs_diff_eq!(fd, sbo.mean_velocity(t), epsilon = 1e-7);
        }
    }

    #[test]
    fn shaking_is_periodic() {
        let (_, dd) = bt_shaking_profile(1, 1.0, 1.0, 1.0, PI / 2.0, 3).unwrap();
        for i in 0..=2 * SHAKING_SAMPLES {
            assert!((dd[i + SHAKING_SAMPLES] - dd[i]).abs() < 1e-8);
        }
    }

    #[test]
    fn shaking_falls_with_frequency() {
        for (n, fa) in [(1, 1.0), (2, 1.0), (1, 2.0)] {
            let low = bt_shaking_max(n, fa, 1.0, 1.0, PI / 2.0).unwrap();
            let high = bt_shaking_max(n, fa, 10.0, 1.0, PI / 2.0).unwrap();
            assert!(high < low, "n={n} F_A={fa}: {high} vs {low}");
        }
    }

    #[test]
    fn signed_bessel_parity() {
        assert_abs_diff_eq!(signed_bessel(1, 1.0).unwrap(), -FIG2_J1, epsilon = 1e-15);
        assert_abs_diff_eq!(signed_bessel(-1, 1.0).unwrap(), FIG2_J1, epsilon = 1e-15);
        assert_abs_diff_eq!(signed_bessel(2, 1.0).unwrap(), signed_bessel(-2, 1.0).unwrap(), epsilon = 1e-15);
    }

    fn drive_strategy() -> impl Strategy<Value = FieldProfile> {
        prop_oneof![
            (0i32..3, -0.05f64..0.05, 0.2f64..2.0, 0.3f64..3.0)
                .prop_map(|(n, d, fa, w)| FieldProfile::ac_dc(n, d, fa, w).unwrap()),
            (0.3f64..1.5, 1.0f64..6.0, 3.0f64..8.0).prop_map(|(s, t1, gap)| {
                FieldProfile::gaussian_train(s, vec![t1, t1 + gap, t1 + 2.0 * gap]).unwrap()
            }),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn displacement_derivative_is_group_velocity(
            field in drive_strategy(),
            k0 in -PI..PI,
            t in 0.5f64..20.0,
        ) {
            let p = PacketParams::new(k0, 100.0, 0.1).unwrap();
            let drive = Drive::Field(field);
            let h = 1e-5;
            let tr = gwp_trajectory(&p, &drive, 1.0, &[t - h, t + h]).unwrap();
            let fd = (tr[1].displacement - tr[0].displacement) / (2.0 * h);
            let vg = group_velocity(&p, &drive, 1.0, t).unwrap();
            prop_assert!((fd - vg).abs() < 1e-6, "fd {} vs vg {}", fd, vg);
        }

        #[test]
        fn chain_and_ring_packets_coincide(
            field in drive_strategy(),
            k0 in -PI..PI,
            t in 0.5f64..15.0,
        ) {
            let chain = chain200();
            let ring = LatticeSpec::ring(200, 1.0).unwrap();
            let psi = gwp_build(&PacketParams::new(k0, 100.0, 0.1).unwrap(), &chain).unwrap();
            let a = chain_propagate_state(&psi, &field, &chain, 0.0, t).unwrap();
            let b = ring_propagate_state(&psi, &FluxProfile::from_field(field), &ring, 0.0, t).unwrap();
            let worst = a.probabilities().iter().zip(b.probabilities()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            prop_assert!(worst < 1e-10);
        }

        #[test]
        fn ring_conserves_each_mode(quanta in -3.0f64..3.0, t in 0.1f64..10.0) {
            let ring = LatticeSpec::ring(32, 1.0).unwrap();
            let psi = StateVector::normalized((0..32).map(|j| Complex64::new((j as f64).sin(), 0.3)).collect()).unwrap();
            let out = ring_propagate_state(&psi, &FluxProfile::static_quanta(quanta, 32), &ring, 0.0, t).unwrap();
            let a = dft_to_momentum(&psi, &ring).unwrap();
            let b = dft_to_momentum(&out, &ring).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x.norm_sqr() - y.norm_sqr()).abs() < 1e-12);
            }
            prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }
}
