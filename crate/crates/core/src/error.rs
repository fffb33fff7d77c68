use thiserror::Error;

/// Errors raised by the link, repeater, optimizer and oracle computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A Gaussian envelope whose decay exponent is not positive cannot be
    /// integrated over the complex plane.
    #[error("{integrand} integrand is not integrable: decay exponent {decay} is not positive")]
    NonIntegrable { integrand: &'static str, decay: f64 },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("Fock cutoff {n_max} too small ({what}); try n_max >= {suggested}")]
    CutoffTooSmall {
        n_max: usize,
        suggested: usize,
        what: &'static str,
    },

    #[error("quadrature grid too narrow: Gaussian tail {tail:e} exceeds tolerance {tolerance:e}")]
    GridTooNarrow { tail: f64, tolerance: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter {
        name,
        value,
        reason,
    }
}
