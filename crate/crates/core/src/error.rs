use thiserror::Error;

/// Errors produced by the prediction engine and its oracles.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("horizon {horizon} too large for exhaustive mode (limit: {limit})")]
    HorizonTooLarge { horizon: usize, limit: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("sequence length {got} does not match horizon {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("prefix of length {len} leaves no round to forecast (horizon {horizon})")]
    PrefixTooLong { len: usize, horizon: usize },

    #[error("outcome {value} is outside the alphabet {alphabet}")]
    InvalidOutcome { value: i64, alphabet: String },

    #[error("alphabet mismatch: expected {expected}, found {found}")]
    AlphabetMismatch { expected: String, found: String },

    #[error("invalid forecast: {0}")]
    InvalidForecast(String),

    #[error("potential evaluated to a non-finite value {value} at {sequence:?}")]
    NonFiniteValue { value: f64, sequence: Vec<i8> },

    #[error("forecast {value} lies outside [-1, 1]; the potential violates stability")]
    StabilityViolation { value: f64 },

    #[error("potential is not stable: worst excess {violation:e} over the budget {budget:e}")]
    Unstable { violation: f64, budget: f64 },

    #[error("mean {mean} is below the achievable level {required}: no forecaster can attain this potential")]
    BelowAchievable { mean: f64, required: f64 },

    #[error("covariate sampler exhausted: {requested} draws requested from a pool of {available}")]
    SamplerExhausted { requested: usize, available: usize },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("matrix is not positive definite (eigenvalue {eigenvalue:e})")]
    NotPositiveDefinite { eigenvalue: f64 },

    #[error("graph error: {0}")]
    Graph(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid specification: {0}")]
    Spec(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
