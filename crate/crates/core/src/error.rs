use thiserror::Error;

/// Errors raised by the solvers in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("not an equilibrium: |f(x0, u0)|_inf = {residual:e} exceeds {tolerance:e}")]
    NotEquilibrium { residual: f64, tolerance: f64 },

    #[error("flow integration diverged near {point:?}")]
    Diverged { point: Vec<f64> },

    #[error("frame is pointwise dependent at {point:?} (rank {rank} < {expected})")]
    DependentFrame {
        point: Vec<f64>,
        rank: usize,
        expected: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Short machine-readable tag, used in structured CLI error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::NotEquilibrium { .. } => "not_equilibrium",
            Error::Diverged { .. } => "diverged",
            Error::DependentFrame { .. } => "dependent_frame",
            Error::InvalidArgument(_) => "invalid_argument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
