use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// The quasi-1D coupling diverges at the confinement-induced resonance.
    #[error("confinement-induced resonance: 1 - C a3d / d_perp = {denominator:e}")]
    Singularity { denominator: f64 },

    #[error("eigensolver did not converge after {iterations} iterations (max residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("could not classify state {index}: {reason}")]
    Classification { index: usize, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("Bose-Hubbard ground state undefined for J = 0 and U = 0")]
    UndefinedGround,

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
