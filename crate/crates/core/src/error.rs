use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported spin multiplicity {0} (expected 2 or 3)")]
    UnsupportedSpin(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid subsystem selection: {0}")]
    InvalidSubsystems(String),

    #[error("layout has no {0} slot")]
    MissingSlot(&'static str),

    #[error("operator is not Hermitian (max |A - A^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("eigendecomposition residual {residual:e} exceeds tolerance")]
    EigenResidual { residual: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("rate must be positive, got {0}")]
    NonPositiveRate(f64),

    #[error("segment count must be even, got {0}")]
    OddSegmentCount(usize),

    #[error("closed form is singular: denominator `{factor}` vanishes")]
    SingularClosedForm { factor: &'static str },

    #[error("stroboscopic identity violated by {deviation:e}")]
    IdentityViolation { deviation: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        field,
        reason: reason.into(),
    }
}
