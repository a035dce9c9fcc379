use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid pmf: {0}")]
    InvalidPmf(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("non-finite value {value} at abscissa {at}")]
    NonFinite { at: f64, value: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("generator outside the class with convex (f(t)-f(0))/t: {0}")]
    OutsideClass(String),

    #[error("{0}")]
    Input(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
