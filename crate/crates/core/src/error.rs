use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("Brownian paths do not share a time grid ({0})")]
    GridMismatch(String),

    #[error("{what} overflows the representable range at t = {t}")]
    Overflow { what: &'static str, t: f64 },

    #[error(
        "quadrature did not converge: value {value} with error estimate {err_est} after {n_evals} evaluations"
    )]
    NonConvergence {
        value: f64,
        err_est: f64,
        n_evals: usize,
    },

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
