use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::hamiltonian::{HamiltonianMatrix, MatrixStructure};
use super::tridiag::TridiagonalEigen;
use crate::error::{Error, Result};
use crate::lattice::{Dft, StateVector};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// `exp(−iHε)` through an eigendecomposition of `H`.
    #[default]
    ExactDiag,
    /// Strang splitting with the hopping applied exactly in its eigenbasis.
    SplitStep,
}

/// Orthonormal type-I discrete sine transform, the eigenbasis of the open
/// chain's hopping. It is an involution.
#[derive(Clone)]
struct Dst {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
    work: Vec<Complex64>,
    scale: f64,
}

impl Dst {
    fn new(n: usize) -> Self {
        let fft = FftPlanner::new().plan_fft_forward(2 * n + 2);
        Self {
            n,
            fft,
            work: vec![Complex64::new(0.0, 0.0); 2 * n + 2],
            scale: (2.0 / (n as f64 + 1.0)).sqrt(),
        }
    }

    /// `y_m = √(2/(N+1)) Σ_j x_j sin(π m j/(N+1))`, with `m, j = 1..=N`
    /// stored at index `m−1`, `j−1`.
    fn apply(&mut self, x: &mut [Complex64]) {
        let n = self.n;
        let w = &mut self.work;
        w[0] = Complex64::new(0.0, 0.0);
        w[n + 1] = Complex64::new(0.0, 0.0);
        for j in 1..=n {
            w[j] = x[j - 1];
            w[2 * n + 2 - j] = -x[j - 1];
        }
        self.fft.process(w);
        // FFT of the odd extension is −2i Σ x_j sin(…)
        let f = Complex64::new(0.0, 0.5 * self.scale);
        for m in 1..=n {
            x[m - 1] = w[m] * f;
        }
    }
}

/// Reusable stepping context for one lattice size and method.
///
/// Holds transform plans, scratch space and the last eigendecomposition,
/// which is reused while `H` is unchanged (static fields).
pub struct StepEngine {
    sites: usize,
    method: Method,
    dft: Dft,
    dst: Option<Dst>,
    eig: TridiagonalEigen,
    cached: Option<(Vec<f64>, f64)>,
    gauge: Vec<Complex64>,
}

impl StepEngine {
    pub fn new(sites: usize, method: Method) -> Self {
        Self {
            sites,
            method,
            dft: Dft::new(sites),
            dst: None,
            eig: TridiagonalEigen::default(),
            cached: None,
            gauge: Vec::new(),
        }
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// ψ ← exp(−iHε) ψ
    pub fn step(&mut self, psi: &mut [Complex64], h: &HamiltonianMatrix, eps: f64) -> Result<()> {
        if psi.len() != self.sites || h.dimension() != self.sites {
            return Err(Error::arg(format!(
                "engine built for {} sites, got state {} and matrix {}",
                self.sites,
                psi.len(),
                h.dimension()
            )));
        }
        if !(eps > 0.0) {
            return Err(Error::arg(format!("time step must be positive, got {eps}")));
        }
        match h.structure() {
            MatrixStructure::CyclicTridiagonal => {
                self.step_circulant(psi, h, eps);
                Ok(())
            }
            MatrixStructure::Tridiagonal => {
                // A complex uniform bond |h|e^{iθ} is gauged to the real |h|
                // by ψ_j → e^{ijθ} ψ_j.
                let theta = h.bond().arg();
                let real_bond = if h.bond().im == 0.0 { h.bond().re } else { h.bond().norm() };
                let gauged = h.bond().im != 0.0;
                if gauged {
                    self.gauge = (0..self.sites).map(|j| Complex64::from_polar(1.0, j as f64 * theta)).collect();
                    psi.iter_mut().zip(&self.gauge).for_each(|(a, g)| *a *= g);
                }
                match self.method {
                    Method::ExactDiag => self.step_chain_exact(psi, h.diagonal(), real_bond, eps)?,
                    Method::SplitStep => self.step_chain_split(psi, h.diagonal(), real_bond, eps),
                }
                if gauged {
                    psi.iter_mut().zip(&self.gauge).for_each(|(a, g)| *a *= g.conj());
                }
                Ok(())
            }
        }
    }

    /// A homogeneous ring is circulant: its eigenvectors are the Fourier
    /// modes, with `λ_m = d + 2 Re(h e^{ik_m})`. Exact for both methods.
    fn step_circulant(&mut self, psi: &mut [Complex64], h: &HamiltonianMatrix, eps: f64) {
        let d = h.diagonal()[0];
        let bond = h.bond();
        self.dft.forward(psi);
        for (m, c) in psi.iter_mut().enumerate() {
            let k = self.dft.bin_momentum(m);
            let lambda = d + 2.0 * (bond * Complex64::from_polar(1.0, k)).re;
            *c *= Complex64::from_polar(1.0, -lambda * eps);
        }
        self.dft.inverse(psi);
    }

    fn step_chain_exact(&mut self, psi: &mut [Complex64], diagonal: &[f64], bond: f64, eps: f64) -> Result<()> {
        let reuse = matches!(&self.cached, Some((d, b)) if *b == bond && d.as_slice() == diagonal);
        if !reuse {
            let off = vec![bond; self.sites - 1];
            self.eig.decompose(diagonal, &off)?;
            self.cached = Some((diagonal.to_vec(), bond));
        }
        self.eig.to_eigenbasis(psi);
        for (c, &lambda) in psi.iter_mut().zip(self.eig.eigenvalues()) {
            *c *= Complex64::from_polar(1.0, -lambda * eps);
        }
        self.eig.from_eigenbasis(psi);
        Ok(())
    }

    fn step_chain_split(&mut self, psi: &mut [Complex64], diagonal: &[f64], bond: f64, eps: f64) {
        let n = self.sites;
        let dst = self.dst.get_or_insert_with(|| Dst::new(n));
        let half_kick = |psi: &mut [Complex64]| {
            for (a, &v) in psi.iter_mut().zip(diagonal) {
                *a *= Complex64::from_polar(1.0, -0.5 * v * eps);
            }
        };
        half_kick(psi);
        dst.apply(psi);
        for (m, c) in psi.iter_mut().enumerate() {
            let lambda = 2.0 * bond * (PI * (m + 1) as f64 / (n as f64 + 1.0)).cos();
            *c *= Complex64::from_polar(1.0, -lambda * eps);
        }
        dst.apply(psi);
        half_kick(psi);
    }
}

/// One step `exp(−iHε)·state`.
pub fn evolve_step(state: &StateVector, h: &HamiltonianMatrix, eps: f64, method: Method) -> Result<StateVector> {
    let mut engine = StepEngine::new(state.len(), method);
    let mut psi = state.amplitudes().to_vec();
    engine.step(&mut psi, h, eps)?;
    Ok(StateVector::from_evolved(psi))
}
