use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("operator is expansive: spectral norm {0}")]
    ExpansiveOperator(f64),

    #[error("affine operator has no fixed point (anchor residual {residual})")]
    EmptyFixedSet { residual: f64 },

    #[error("iterate is a fixed point; relaxation parameter undefined")]
    AtFixedPoint,

    #[error("relaxation value {value} at index {index} is outside ]0,1[")]
    BandViolation { index: usize, value: f64 },

    #[error("operator is the identity")]
    IdentityOperator,

    #[error("reference point is not a fixed point (residual {0})")]
    YNotFixed(f64),

    #[error("run did not record a distance history for the requested point")]
    MissingHistory,

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    /// True for rejections that come from the mathematics of the input
    /// (expansive operator, empty fixed set) rather than malformed input.
    pub fn is_mathematical_rejection(&self) -> bool {
        matches!(
            self,
            Error::ExpansiveOperator(_) | Error::EmptyFixedSet { .. } | Error::IdentityOperator
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
