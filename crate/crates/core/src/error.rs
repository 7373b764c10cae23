use thiserror::Error;

/// Error classes. The CLI maps each class to a distinct exit code.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("NOT_PRIME: {0} is not prime")]
    NotPrime(u64),
    #[error("NO_EMBEDDING: {0}")]
    NoEmbedding(String),
    #[error("SINGULAR: matrix is singular")]
    Singular,
    #[error("NOT_A_RATIONAL: polynomial coefficients are not in F_q[t]")]
    NotARational,
    #[error("LOCAL_FACTOR_INDETERMINATE: {0}")]
    LocalFactorIndeterminate(String),
    #[error("NOT_INJECTIVE: det T = 0")]
    NotInjective,
    #[error("BAD_CHARACTERISTIC: det T is not a unit times a power of (t - theta)")]
    BadCharacteristic,
    #[error("NOT_PURE: the Newton polygon at infinity has {0} slopes")]
    NotPure(usize),
    #[error("DEGENERATE: positive rank with dimension 0")]
    Degenerate,
    #[error("FIELD_MISMATCH: {0}")]
    FieldMismatch(String),
    #[error("DEGREE_BOUND_INSUFFICIENT: {0}")]
    DegreeBoundInsufficient(String),
    #[error("NOT_ISOGENY")]
    NotIsogeny,
    #[error("BAD_QUOTIENT: {0}")]
    BadQuotient(String),
    #[error("NO_ISOGENY_IN_IDEAL")]
    NoIsogenyInIdeal,
    #[error("NOT_CHARACTERISTIC_PLACE")]
    NotCharacteristicPlace,
    #[error("NO_COMMON_SUBFIELD")]
    NoCommonSubfield,
    #[error("SPLITTING_CAP_EXCEEDED: {0}")]
    SplittingCapExceeded(String),
    #[error("PRECISION_INSUFFICIENT: {0}")]
    PrecisionInsufficient(String),
    #[error("NOT_SEMISIMPLE")]
    NotSemisimple,
    #[error("PARSE_ERROR at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("computation failed: {0}")]
    Computation(String),
    #[error("INTERNAL: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse error class, used for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Validation,
    Computation,
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse { .. } => ErrorClass::Parse,
            Error::NotPrime(_)
            | Error::NotInjective
            | Error::BadCharacteristic
            | Error::NotPure(_)
            | Error::Degenerate
            | Error::FieldMismatch(_)
            | Error::Invalid(_)
            | Error::NotARational
            | Error::NoEmbedding(_) => ErrorClass::Validation,
            Error::Internal(_) => ErrorClass::Internal,
            _ => ErrorClass::Computation,
        }
    }
}
