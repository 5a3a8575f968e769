use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the function's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Bessel order beyond the supported recursion depth.
    #[error("unsupported Bessel order {order} (maximum {max})")]
    UnsupportedOrder { order: f64, max: f64 },

    /// No sign change was found where a root was expected.
    #[error("no sign change for {what} in window [{lo}, {hi}]")]
    Bracket { what: String, lo: f64, hi: f64 },

    /// Parameters outside the regime the closed forms are valid for.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("assembly error: {0}")]
    Assembly(String),

    /// The eigensolver did not reach the residual target.
    #[error("eigensolver failed: {message} (residual {residual:e})")]
    Solver { message: String, residual: f64 },

    /// A result was queried for data it does not carry.
    #[error("state error: {0}")]
    State(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("fit error: {0}")]
    Fit(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
