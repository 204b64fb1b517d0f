use thiserror::Error;

/// Errors raised by the library.
///
/// [`Error::Constraint`] and [`Error::InvalidParameter`] mean the inputs fall
/// outside the hypotheses of the requested statement or operation; the other
/// variants mean the input data itself is malformed.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{0}")]
    Constraint(String),
    #[error("explicit matrix is not symmetric at ({i},{j}): {a} != {b}")]
    Asymmetric { i: usize, j: usize, a: f64, b: f64 },
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("results come from different versions: {0} vs {1}")]
    MixedVersions(String, String),
    #[error("csv: {0}")]
    Csv(String),
}

impl Error {
    /// True when the failure is a violated hypothesis/precondition rather than
    /// broken input data.
    pub fn is_precondition(&self) -> bool {
        matches!(self, Error::InvalidParameter(_) | Error::Constraint(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn constraint(msg: impl Into<String>) -> Error {
    Error::Constraint(msg.into())
}
