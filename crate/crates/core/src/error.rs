use alloc::string::String;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Panel doubling stopped before reaching the requested tolerance.
    #[error("quadrature did not converge (last residual {residual:e})")]
    Quadrature { residual: f64 },
    /// A root solver failed to bracket or converge.
    #[error("root solver failed: {0}")]
    Root(String),
    /// A numerical step (finite differences, extrapolation) became unreliable.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// The input is valid but the operation does not support it.
    #[error("unsupported input: {0}")]
    Unsupported(String),
    /// The quantity is undefined for this input (for example no inner boundary).
    #[error("not applicable: {0}")]
    NotApplicable(String),
    /// The inputs violate a hypothesis of the estimate being evaluated.
    #[error("outside hypothesis: {0}")]
    OutOfHypothesis(String),
    /// The capping construction could not satisfy one of its inequalities.
    #[error("cap construction failed: {0}")]
    CapConstruction(String),
    /// Invalid family or run configuration.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(alloc::format!($($arg)*)) };
}
pub(crate) use domain;
