//! Shared lattice types: geometry, time grids, site-basis states and the
//! momentum grid with its unitary DFT.
//!
//! Units throughout: ħ = 1, lattice constant = 1, time in 1/J, flux in
//! units of the flux quantum.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on Σ|ψ_j|² when a state is constructed from caller data.
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    /// Open chain, the finite stand-in for the infinite chain.
    Chain,
    /// Periodic ring; the bond N→1 exists.
    Ring,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LatticeSpec {
    pub kind: LatticeKind,
    pub sites: usize,
    pub hopping: f64,
    /// Storage index of the site labelled j = 0 in the linear potential.
    pub position_offset: i64,
}

impl LatticeSpec {
    pub fn new(kind: LatticeKind, sites: usize, hopping: f64) -> Result<Self> {
        let spec = LatticeSpec {
            kind,
            sites,
            hopping,
            position_offset: (sites / 2) as i64,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn chain(sites: usize, hopping: f64) -> Result<Self> {
        Self::new(LatticeKind::Chain, sites, hopping)
    }

    pub fn ring(sites: usize, hopping: f64) -> Result<Self> {
        Self::new(LatticeKind::Ring, sites, hopping)
    }

    pub fn with_offset(mut self, position_offset: i64) -> Self {
        self.position_offset = position_offset;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.sites < 2 {
            return Err(Error::arg(format!("lattice needs at least 2 sites, got {}", self.sites)));
        }
        if !(self.hopping > 0.0 && self.hopping.is_finite()) {
            return Err(Error::arg(format!("hopping must be positive, got {}", self.hopping)));
        }
        Ok(())
    }

    /// Coordinate entering the linear potential for storage index `j`.
    #[inline]
    pub fn position(&self, j: usize) -> f64 {
        j as f64 - self.position_offset as f64
    }

    pub fn momentum_grid(&self) -> MomentumGrid {
        MomentumGrid::new(self.sites)
    }
}

#[derive(Deserialize)]
struct LatticeSpecRaw {
    kind: LatticeKind,
    sites: usize,
    #[serde(default = "one")]
    hopping: f64,
    position_offset: Option<i64>,
}

fn one() -> f64 {
    1.0
}

impl<'de> Deserialize<'de> for LatticeSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = LatticeSpecRaw::deserialize(d)?;
        let mut spec = LatticeSpec::new(raw.kind, raw.sites, raw.hopping).map_err(serde::de::Error::custom)?;
        if let Some(off) = raw.position_offset {
            spec.position_offset = off;
        }
        Ok(spec)
    }
}

/// Uniform time grid `t_n = t_start + n·ε`, `n = 0..=steps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, steps: usize) -> Result<Self> {
        if !(t_end > t_start) {
            return Err(Error::arg(format!("time grid needs t_end > t_start ({t_start}, {t_end})")));
        }
        if steps == 0 {
            return Err(Error::arg("time grid needs at least one step"));
        }
        Ok(TimeGrid { t_start, t_end, steps })
    }

    /// Grid whose step is the nearest one to `eps` that divides the span evenly.
    pub fn with_step(t_start: f64, t_end: f64, eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::arg(format!("step must be positive, got {eps}")));
        }
        let steps = ((t_end - t_start) / eps).round().max(1.0) as usize;
        Self::new(t_start, t_end, steps)
    }

    #[inline]
    pub fn step(&self) -> f64 {
        (self.t_end - self.t_start) / self.steps as f64
    }

    #[inline]
    pub fn time(&self, n: usize) -> f64 {
        if n == self.steps {
            self.t_end
        } else {
            self.t_start + n as f64 * self.step()
        }
    }
}

/// Single-particle state in the site basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that must already be normalized to within 1e-12.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::arg("state needs at least 2 sites"));
        }
        let s = Self { amplitudes };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::arg(format!("state is not normalized: Σ|ψ|² = {norm}")));
        }
        Ok(s)
    }

    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::arg("cannot normalize a zero or non-finite state"));
        }
        Self::new(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    pub fn site(sites: usize, j: usize) -> Result<Self> {
        if j >= sites {
            return Err(Error::arg(format!("site {j} outside lattice of {sites} sites")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); sites];
        amps[j] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    /// Evolved states keep whatever norm the propagator produced; drift is
    /// measured, never corrected.
    pub(crate) fn from_evolved(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |⟨self|other⟩|²
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// L² distance between the two site-probability distributions.
    pub fn probability_distance(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a.norm_sqr() - b.norm_sqr()).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Reduce a momentum into the representative interval (−π, π].
pub fn wrap_momentum(k: f64) -> f64 {
    let r = (k + PI).rem_euclid(2.0 * PI) - PI;
    if r <= -PI {
        r + 2.0 * PI
    } else {
        r
    }
}

/// `k_n = 2πn/N`, `n = 1..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumGrid {
    values: Vec<f64>,
}

impl MomentumGrid {
    pub fn new(sites: usize) -> Self {
        let values = (1..=sites).map(|n| 2.0 * PI * n as f64 / sites as f64).collect();
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Grid values reduced into (−π, π], same order.
    pub fn reduced(&self) -> Vec<f64> {
        self.values.iter().map(|&k| wrap_momentum(k)).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Cached forward/inverse unitary DFT of fixed length.
///
/// Works in FFT-bin order: bin `m` holds the component with `k = 2πm/N`,
/// so the grid point `n = N` (k = 2π) lives in bin 0.
#[derive(Clone)]
pub struct Dft {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl std::fmt::Debug for Dft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Dft").field("len", &self.len).finish()
    }
}

impl Dft {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
            scale: 1.0 / (len as f64).sqrt(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `c_m = N^{-1/2} Σ_j e^{-2πimj/N} ψ_j`, in place.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
        buf.iter_mut().for_each(|c| *c *= self.scale);
    }

    /// `ψ_j = N^{-1/2} Σ_m e^{2πimj/N} c_m`, in place.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
        buf.iter_mut().for_each(|c| *c *= self.scale);
    }

    /// Momentum of FFT bin `m`.
    #[inline]
    pub fn bin_momentum(&self, m: usize) -> f64 {
        2.0 * PI * m as f64 / self.len as f64
    }
}

/// Momentum amplitudes `c_k = N^{-1/2} Σ_j e^{-ikj} ψ_j`, ordered as
/// [`MomentumGrid`] (`n = 1..=N`).
pub fn dft_to_momentum(state: &StateVector, lattice: &LatticeSpec) -> Result<Vec<Complex64>> {
    check_len(state, lattice)?;
    let n = state.len();
    let dft = Dft::new(n);
    let mut buf = state.amplitudes().to_vec();
    dft.forward(&mut buf);
    Ok((1..=n).map(|i| buf[i % n]).collect())
}

/// Inverse of [`dft_to_momentum`]; input in [`MomentumGrid`] order.
pub fn dft_from_momentum(coefficients: &[Complex64], lattice: &LatticeSpec) -> Result<StateVector> {
    if coefficients.len() != lattice.sites {
        return Err(Error::arg(format!(
            "{} momentum coefficients for a {}-site lattice",
            coefficients.len(),
            lattice.sites
        )));
    }
    let n = coefficients.len();
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (i, c) in coefficients.iter().enumerate() {
        buf[(i + 1) % n] = *c;
    }
    Dft::new(n).inverse(&mut buf);
    Ok(StateVector::from_evolved(buf))
}

pub(crate) fn check_len(state: &StateVector, lattice: &LatticeSpec) -> Result<()> {
    if state.len() != lattice.sites {
        return Err(Error::arg(format!(
            "state has {} amplitudes, lattice has {} sites",
            state.len(),
            lattice.sites
        )));
    }
    Ok(())
}
