use alloc::string::String;

/// Errors raised by the finite-space routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("outcome space must contain at least one outcome")]
    EmptySpace,

    #[error("duplicate outcome label `{0}`")]
    DuplicateLabel(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid weight {value} at index {index}: weights must be finite and non-negative")]
    InvalidWeight { index: usize, value: f64 },

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("weights sum to {sum}, expected 1 within 1e-12")]
    NotNormalized { sum: f64 },

    #[error("row {row} of the stochastic matrix sums to {sum}, expected 1")]
    NotStochastic { row: usize, sum: f64 },

    #[error("objects live on different outcome spaces")]
    SpaceMismatch,

    #[error("absolute continuity violated at outcome index {0}")]
    AbsContViolation(usize),

    #[error("outcome space is not declared as a two-fold product")]
    NotAProductSpace,

    #[error("enumeration of {requested} items exceeds the cap of {cap}")]
    EnumerationCapExceeded { requested: f64, cap: u64 },

    #[error("measure is not faithful (zero weight at index {0})")]
    FaithfulnessError(usize),

    #[error("alpha = {0} outside the admissible range")]
    AlphaOutOfRange(f64),

    #[error("theta = {theta} is not inside the open interval ({lo}, {hi})")]
    ThetaOutOfOpenRange { theta: f64, lo: f64, hi: f64 },

    #[error("theta = {theta} outside the parameter interval [{lo}, {hi}]")]
    ThetaOutOfRange { theta: f64, lo: f64, hi: f64 },

    #[error("random variable is constant on the support")]
    DegenerateVariable,

    #[error("order {0} exceeds the supported maximum of 20")]
    OrderTooLarge(usize),

    #[error("alphabet of size {size} exceeds the supported maximum of {max}")]
    AlphabetTooLarge { size: usize, max: usize },

    #[error("involution does not preserve the support of the measure")]
    SupportNotInvariant,

    #[error("permutation is not an involution at index {0}")]
    NotAnInvolution(usize),

    #[error("sample is empty")]
    EmptySample,

    #[error("quadrature did not converge within {panels} panels")]
    QuadratureNonConvergence { panels: usize },

    #[error("s = {0} is negative")]
    SOutOfRange(f64),

    #[error("computation produced an undefined value (NaN): {0}")]
    Undefined(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
