use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("matrix is not Hermitian (anti-Hermitian part {0:.3e})")]
    NotHermitian(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("not a valid density matrix: {0}")]
    NotAState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("invalid sweep specification: {0}")]
    InvalidSpec(String),

    #[error("bracket error: {0}")]
    Bracket(String),

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}
