use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::Drive;
use crate::lattice::{LatticeKind, LatticeSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixStructure {
    /// Open chain.
    Tridiagonal,
    /// Ring: the corner elements couple sites N−1 and 0.
    CyclicTridiagonal,
}

/// Instantaneous single-particle Hamiltonian of a homogeneous lattice.
///
/// Every directed bond `j → j+1` carries the same element `H[j][j+1] = bond`;
/// the reverse bond carries its conjugate, so the matrix is Hermitian by
/// construction.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianMatrix {
    pub(crate) structure: MatrixStructure,
    pub(crate) diagonal: Vec<f64>,
    pub(crate) bond: Complex64,
}

impl HamiltonianMatrix {
    pub fn structure(&self) -> MatrixStructure {
        self.structure
    }

    pub fn dimension(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// `H[j][j+1]`, identical on every bond.
    pub fn bond(&self) -> Complex64 {
        self.bond
    }

    /// `H[j][(j+1) mod N]` for every bond present (N−1 for a chain, N for a ring).
    pub fn off_diagonal(&self) -> Vec<Complex64> {
        let bonds = match self.structure {
            MatrixStructure::Tridiagonal => self.dimension() - 1,
            MatrixStructure::CyclicTridiagonal => self.dimension(),
        };
        vec![self.bond; bonds]
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let n = self.dimension();
        let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for (j, &d) in self.diagonal.iter().enumerate() {
            m[j][j] += d;
        }
        for (j, &h) in self.off_diagonal().iter().enumerate() {
            let k = (j + 1) % n;
            m[j][k] += h;
            m[k][j] += h.conj();
        }
        m
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let m = self.to_dense();
        let n = m.len();
        (0..n).all(|i| (0..n).all(|j| (m[i][j] - m[j][i].conj()).norm() <= tol))
    }

    /// H·x
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.dimension();
        let mut y: Vec<Complex64> = x.iter().zip(&self.diagonal).map(|(a, d)| a * d).collect();
        let cyclic = self.structure == MatrixStructure::CyclicTridiagonal;
        for j in 0..n {
            if j + 1 < n || cyclic {
                let k = (j + 1) % n;
                y[j] += self.bond * x[k];
                y[k] += self.bond.conj() * x[j];
            }
        }
        y
    }
}

/// `H(t)`: chain `−J Σ(a†_j a_{j+1} + h.c.) + F(t) Σ (j − offset) n_j`, or
/// ring `−J Σ(e^{iφ(t)} a†_j a_{j+1} + h.c.)`.
pub fn build_hamiltonian(lattice: &LatticeSpec, drive: &Drive, t: f64) -> Result<HamiltonianMatrix> {
    lattice.validate()?;
    let n = lattice.sites;
    let j = lattice.hopping;
    match (lattice.kind, drive) {
        (LatticeKind::Chain, Drive::Field(field)) => {
            let f = field.evaluate(t)?;
            Ok(HamiltonianMatrix {
                structure: MatrixStructure::Tridiagonal,
                diagonal: (0..n).map(|s| f * lattice.position(s)).collect(),
                bond: Complex64::new(-j, 0.0),
            })
        }
        (LatticeKind::Ring, Drive::Flux(flux)) => {
            let phi = flux.phi(t)?;
            Ok(HamiltonianMatrix {
                structure: MatrixStructure::CyclicTridiagonal,
                diagonal: vec![0.0; n],
                bond: Complex64::from_polar(-j, phi),
            })
        }
        (LatticeKind::Chain, Drive::Flux(_)) => Err(Error::arg("a chain is driven by a field, not a flux")),
        (LatticeKind::Ring, Drive::Field(_)) => {
            Err(Error::arg("a ring is driven by a flux; use FluxProfile::from_field for the equivalent flux"))
        }
    }
}
