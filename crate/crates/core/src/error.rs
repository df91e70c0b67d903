use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse grouping used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Config,
    Numerical,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid spin basis: dimension {0} (need at least 2)")]
    InvalidBasis(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("Taylor polynomial M_kappa is not invertible at level n={level} (value {value:e})")]
    NonInvertible { level: usize, value: f64 },

    #[error("negative time t={0}")]
    NegativeTime(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid step size dt={0}")]
    StepSizeInvalid(f64),

    #[error("positivity violated at t={time}: smallest eigenvalue {min_eigenvalue:e} (dt too large?)")]
    PositivityViolation { time: f64, min_eigenvalue: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("angle out of range: theta={theta}, phi={phi}")]
    AngleOutOfRange { theta: f64, phi: f64 },

    #[error("Husimi function negative ({value:e}) at theta={theta}, phi={phi}")]
    NegativeQ { value: f64, theta: f64, phi: f64 },

    #[error("operator {0} has no phase-space differential form")]
    UnsupportedOperator(String),

    #[error("fidelity input is not positive semidefinite (smallest eigenvalue {0:e})")]
    NonPositiveInput(f64),

    #[error("continuous eigensolver did not converge: {0}")]
    NotConverged(String),

    #[error("invalid configuration: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("NESS window of {window} samples exceeds trajectory length {len}")]
    WindowTooLarge { window: usize, len: usize },
}

impl Error {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::InvalidBasis(_)
            | Error::InvalidParameter { .. }
            | Error::NegativeTime(_)
            | Error::DimensionMismatch { .. }
            | Error::StepSizeInvalid(_)
            | Error::AngleOutOfRange { .. }
            | Error::UnsupportedOperator(_)
            | Error::Validation(_)
            | Error::WindowTooLarge { .. } => ErrorCategory::Config,
            Error::NonInvertible { .. }
            | Error::PositivityViolation { .. }
            | Error::InvalidState(_)
            | Error::NegativeQ { .. }
            | Error::NonPositiveInput(_)
            | Error::NotConverged(_) => ErrorCategory::Numerical,
        }
    }
}
