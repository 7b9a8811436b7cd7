use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A flow or transform was evaluated where its defining inequality fails.
    /// The message names the inequality.
    #[error("domain violation: {0}")]
    Domain(String),

    #[error("value {value} outside {range}")]
    OutOfRange { value: f64, range: String },

    /// Momentum-space integrand still above tolerance at the cutoff.
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
