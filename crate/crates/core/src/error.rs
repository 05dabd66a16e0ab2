use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Caller supplied arguments that do not fit the operation.
    #[error("usage error: {0}")]
    Usage(String),

    /// `|alpha| >= pi/2`: the spectrum is no longer real and the propagator is singular.
    #[error("alpha = {alpha} is at or beyond the exceptional point (|alpha| must be < pi/2)")]
    ExceptionalPoint { alpha: f64 },

    /// A parameter outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The observable handed to a projector is not Hermitian with square identity.
    #[error("observable is not dichotomic (residual {residual:e})")]
    NonDichotomic { residual: f64 },

    /// A state whose trace is too small to renormalize.
    #[error("state weight {weight:e} is too small to renormalize")]
    DegenerateWeight { weight: f64 },

    /// A measurement context whose total unnormalized weight vanished.
    #[error("context {context} has total weight {weight:e}; cannot normalize")]
    DegenerateContext { context: String, weight: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
