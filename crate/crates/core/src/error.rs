use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("t = {t} lies outside the tabulated domain [{start}, {end}]")]
    Domain { t: f64, start: f64, end: f64 },

    #[error("quadrature on [{a}, {b}] did not reach tolerance: estimate {estimate}, error estimate {error_estimate:e}")]
    Quadrature {
        a: f64,
        b: f64,
        estimate: f64,
        error_estimate: f64,
    },

    #[error("state reaches the open boundary (edge occupancy {occupancy:e}); the infinite-chain propagator does not apply")]
    EdgeOccupancy { occupancy: f64 },

    #[error("tridiagonal eigensolver did not converge after {iterations} iterations")]
    Eigensolver { iterations: usize },

    #[error("central momentum undefined: circular-mean magnitude {magnitude:e}")]
    UndefinedMomentum { magnitude: f64 },

    #[error("boundary contamination at t = {t}: edge occupancy {occupancy:e}")]
    BoundaryContamination { t: f64, occupancy: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}
