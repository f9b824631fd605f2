use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{check_len, Dft, LatticeKind, LatticeSpec, StateVector};

/// Below this circular-mean magnitude (relative to the norm) the momentum
/// distribution has no meaningful center.
pub const MOMENTUM_DEFINED_THRESHOLD: f64 = 1e-6;

/// Sites counted as "edge" at each end of a chain: `max(1, N/20)`.
pub fn default_edge_margin(sites: usize) -> usize {
    (sites / 20).max(1)
}

/// `⟨j⟩` over storage indices.
pub fn center(probabilities: &[f64]) -> f64 {
    let norm: f64 = probabilities.iter().sum();
    probabilities.iter().enumerate().map(|(j, p)| j as f64 * p).sum::<f64>() / norm
}

/// Standard deviation of the site distribution.
pub fn width(probabilities: &[f64]) -> f64 {
    let norm: f64 = probabilities.iter().sum();
    let mean = center(probabilities);
    let var = probabilities
        .iter()
        .enumerate()
        .map(|(j, p)| (j as f64 - mean).powi(2) * p)
        .sum::<f64>()
        / norm;
    var.max(0.0).sqrt()
}

/// Probability on the outermost `margin` sites at both ends.
pub fn edge_occupancy(probabilities: &[f64], margin: usize) -> f64 {
    let n = probabilities.len();
    let m = margin.min(n / 2);
    probabilities[..m].iter().sum::<f64>() + probabilities[n - m..].iter().sum::<f64>()
}

/// `arg Σ_k |c_k|² e^{ik}`, the circular mean of the momentum distribution,
/// in (−π, π].
pub fn central_momentum(state: &StateVector, lattice: &LatticeSpec) -> Result<f64> {
    check_len(state, lattice)?;
    let dft = Dft::new(state.len());
    let mut buf = state.amplitudes().to_vec();
    circular_mean(&dft, &mut buf)
}

fn circular_mean(dft: &Dft, buf: &mut [Complex64]) -> Result<f64> {
    let norm: f64 = buf.iter().map(|a| a.norm_sqr()).sum();
    dft.forward(buf);
    let z: Complex64 = buf
        .iter()
        .enumerate()
        .map(|(m, c)| c.norm_sqr() * Complex64::from_polar(1.0, dft.bin_momentum(m)))
        .sum();
    let magnitude = z.norm() / norm;
    if !(magnitude >= MOMENTUM_DEFINED_THRESHOLD) {
        return Err(Error::UndefinedMomentum { magnitude });
    }
    Ok(crate::lattice::wrap_momentum(z.arg()))
}

/// Time-indexed measurements of an evolving state.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ObservableSeries {
    pub times: Vec<f64>,
    pub center: Vec<f64>,
    pub width: Vec<f64>,
    /// NaN where the momentum distribution has no defined center.
    pub central_momentum: Vec<f64>,
    pub group_velocity: Vec<f64>,
    pub norm: Vec<f64>,
    /// Always zero on a ring, which has no edges.
    pub edge_occupancy: Vec<f64>,
}

impl ObservableSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Index of the sample closest to `t`.
    pub fn nearest(&self, t: f64) -> Option<usize> {
        (0..self.len()).min_by(|&a, &b| (self.times[a] - t).abs().total_cmp(&(self.times[b] - t).abs()))
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.norm.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Finite differences of `center`: centered inside, one-sided at the ends.
    pub(crate) fn fill_group_velocity(&mut self) {
        let n = self.len();
        self.group_velocity = vec![0.0; n];
        if n < 2 {
            return;
        }
        let (t, c) = (&self.times, &self.center);
        for i in 0..n {
            let (a, b) = if i == 0 {
                (0, 1)
            } else if i == n - 1 {
                (n - 2, n - 1)
            } else {
                (i - 1, i + 1)
            };
            self.group_velocity[i] = (c[b] - c[a]) / (t[b] - t[a]);
        }
    }
}

/// Measures one state; reuses a DFT plan across samples.
pub(crate) struct Probe {
    dft: Dft,
    kind: LatticeKind,
    margin: usize,
    buf: Vec<Complex64>,
}

pub(crate) struct Sample {
    pub center: f64,
    pub width: f64,
    pub central_momentum: f64,
    pub norm: f64,
    pub edge_occupancy: f64,
}

impl Probe {
    pub fn new(lattice: &LatticeSpec, margin: usize) -> Self {
        Self {
            dft: Dft::new(lattice.sites),
            kind: lattice.kind,
            margin,
            buf: Vec::with_capacity(lattice.sites),
        }
    }

    pub fn measure(&mut self, psi: &[Complex64]) -> Sample {
        let p: Vec<f64> = psi.iter().map(|a| a.norm_sqr()).collect();
        self.buf.clear();
        self.buf.extend_from_slice(psi);
        Sample {
            center: center(&p),
            width: width(&p),
            central_momentum: circular_mean(&self.dft, &mut self.buf).unwrap_or(f64::NAN),
            norm: p.iter().sum(),
            edge_occupancy: match self.kind {
                LatticeKind::Chain => edge_occupancy(&p, self.margin),
                LatticeKind::Ring => 0.0,
            },
        }
    }
}
