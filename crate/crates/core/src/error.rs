use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library reports.
///
/// Variants carry enough context for a readable message; [`Error::name`] gives the stable
/// identifier used by the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 2 and at most {max}, got {modulus}")]
    InvalidModulus { modulus: i64, max: i64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("linear system has no solution: {0}")]
    Inconsistent(String),
    #[error("internal contract violated: {0}")]
    InternalContractViolation(String),
    #[error("matrix is not symplectic modulo {modulus}")]
    NotSymplectic { modulus: i64 },
    #[error("phase vector entry {index} has the wrong parity")]
    PhaseParityViolation { index: usize },
    #[error("operation requires an odd qudit dimension, got d = {0}")]
    EvenDimension(i64),
    #[error("qudit index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid Clifford operation: {0}")]
    InvalidOperation(Box<Error>),
    #[error("stabilizer generators do not commute (columns {0} and {1})")]
    NonCommuting(usize, usize),
    #[error("generated group has {found} elements, expected {expected}")]
    WrongGroupSize { expected: String, found: String },
    #[error("generator {generator} violates the stabilizer phase condition")]
    PhaseConditionViolation { generator: usize },
    #[error("label {label:?} carries different phases in the raw expansion")]
    LabelPhaseMismatch { label: Vec<i64> },
    #[error("dense dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
}

impl Error {
    /// Stable identifier of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidModulus { .. } => "InvalidModulus",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::NotInvertible(_) => "NotInvertible",
            Error::Inconsistent(_) => "Inconsistent",
            Error::InternalContractViolation(_) => "InternalContractViolation",
            Error::NotSymplectic { .. } => "NotSymplectic",
            Error::PhaseParityViolation { .. } => "PhaseParityViolation",
            Error::EvenDimension(_) => "EvenDimension",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::InvalidOperation(_) => "InvalidOperation",
            Error::NonCommuting(..) => "NonCommuting",
            Error::WrongGroupSize { .. } => "WrongGroupSize",
            Error::PhaseConditionViolation { .. } => "PhaseConditionViolation",
            Error::LabelPhaseMismatch { .. } => "LabelPhaseMismatch",
            Error::DimensionCap { .. } => "DimensionCap",
        }
    }
}
