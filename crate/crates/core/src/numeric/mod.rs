//! Brute-force reference engine: stepping `exp(−iH(t_n + ε/2)ε)` through a
//! time grid, with measured observables.

mod engine;
mod hamiltonian;
mod observables;
mod tridiag;

pub use engine::{evolve_step, Method, StepEngine};
pub use hamiltonian::{build_hamiltonian, HamiltonianMatrix, MatrixStructure};
pub use observables::{
    center, central_momentum, default_edge_margin, edge_occupancy, width, ObservableSeries,
    MOMENTUM_DEFINED_THRESHOLD,
};
pub use tridiag::TridiagonalEigen;

use crate::error::{Error, Result};
use crate::fields::Drive;
use crate::lattice::{check_len, LatticeKind, LatticeSpec, StateVector, TimeGrid};
use observables::Probe;

/// Chain runs abort once this much probability sits on the edge sites.
pub const DEFAULT_ABORT_THRESHOLD: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub method: Method,
    /// Record observables every this many steps (the last step is always recorded).
    pub sample_every: usize,
    /// Sites per end counted by the edge-occupancy guard; `None` means `max(1, N/20)`.
    pub edge_margin: Option<usize>,
    pub abort_threshold: f64,
    pub keep_snapshots: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            method: Method::ExactDiag,
            sample_every: 1,
            edge_margin: None,
            abort_threshold: DEFAULT_ABORT_THRESHOLD,
            keep_snapshots: false,
        }
    }
}

impl RunOptions {
    pub fn sampled(method: Method, sample_every: usize) -> Self {
        Self { method, sample_every, ..Self::default() }
    }

    pub fn with_snapshots(mut self) -> Self {
        self.keep_snapshots = true;
        self
    }
}

#[derive(Clone, Debug)]
pub struct EvolutionRun {
    pub final_state: StateVector,
    pub series: ObservableSeries,
    /// States at the sample times, when requested.
    pub snapshots: Vec<StateVector>,
}

/// Evolve `state` over `grid`, sampling every `sample_every` steps.
pub fn run_evolution(
    state: &StateVector,
    lattice: &LatticeSpec,
    drive: &Drive,
    grid: &TimeGrid,
    method: Method,
    sample_every: usize,
) -> Result<EvolutionRun> {
    run_evolution_with(state, lattice, drive, grid, &RunOptions::sampled(method, sample_every))
}

pub fn run_evolution_with(
    state: &StateVector,
    lattice: &LatticeSpec,
    drive: &Drive,
    grid: &TimeGrid,
    options: &RunOptions,
) -> Result<EvolutionRun> {
    lattice.validate()?;
    drive.validate()?;
    check_len(state, lattice)?;
    if options.sample_every == 0 {
        return Err(Error::arg("sample_every must be at least 1"));
    }
    let margin = options.edge_margin.unwrap_or_else(|| default_edge_margin(lattice.sites));
    let eps = grid.step();
    let mut engine = StepEngine::new(lattice.sites, options.method);
    let mut probe = Probe::new(lattice, margin);
    let mut psi = state.amplitudes().to_vec();
    let mut series = ObservableSeries::default();
    let mut snapshots = Vec::new();

    let mut record = |n: usize, psi: &[num_complex::Complex64], series: &mut ObservableSeries| -> Result<()> {
        let t = grid.time(n);
        let s = probe.measure(psi);
        series.times.push(t);
        series.center.push(s.center);
        series.width.push(s.width);
        series.central_momentum.push(s.central_momentum);
        series.norm.push(s.norm);
        series.edge_occupancy.push(s.edge_occupancy);
        if options.keep_snapshots {
            snapshots.push(StateVector::from_evolved(psi.to_vec()));
        }
        if lattice.kind == LatticeKind::Chain && s.edge_occupancy > options.abort_threshold {
            return Err(Error::BoundaryContamination { t, occupancy: s.edge_occupancy });
        }
        Ok(())
    };

    record(0, &psi, &mut series)?;
    for n in 0..grid.steps {
        let t_mid = grid.time(n) + 0.5 * eps;
        let h = build_hamiltonian(lattice, drive, t_mid)?;
        engine.step(&mut psi, &h, eps)?;
        if (n + 1) % options.sample_every == 0 || n + 1 == grid.steps {
            record(n + 1, &psi, &mut series)?;
        }
    }
    series.fill_group_velocity();
    Ok(EvolutionRun { final_state: StateVector::from_evolved(psi), series, snapshots })
}
