use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid surface: {0}")]
    InvalidSurface(String),

    /// A quantity is singular (or undefined) at the requested radius.
    #[error("{quantity} is undefined at r = {r}: {reason}")]
    Domain {
        quantity: &'static str,
        r: f64,
        reason: &'static str,
    },

    #[error("Bessel order {0} is outside the supported range |n| <= 64")]
    UnsupportedOrder(i64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("requested {requested} eigenvalues but only {available} positive eigenvalues exist")]
    NotEnoughEigenvalues { requested: usize, available: usize },

    #[error("{stage} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        stage: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("profile is identically zero and cannot be normalized")]
    ZeroProfile,
}

impl Error {
    /// True for failures of a numerical method, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::NotEnoughEigenvalues { .. } | Error::ZeroProfile
        )
    }
}
