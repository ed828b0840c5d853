use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two parameters coincide; indices are 1-based.
    #[error("duplicate alpha: alpha_{i} = alpha_{j}")]
    DuplicateAlpha { i: usize, j: usize },

    #[error("at least {needed} coordinates required, got {found}")]
    TooFewCoordinates { needed: usize, found: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for N = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("indices must be distinct")]
    RepeatedIndex,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular constraint: |{{phi, Pi}}| = {0:e} < 1e-12")]
    SingularConstraint(f64),

    #[error("ellipsoid axes must be positive, alpha_{index} = {value}")]
    NonPositiveAxis { index: usize, value: f64 },

    #[error("degenerate point: x = 0 cannot be projected")]
    DegeneratePoint,

    #[error("start point is off the constraint surface (|phi| = {phi:e}, |Pi| = {pi:e})")]
    OffSurface { phi: f64, pi: f64 },

    #[error("implicit step {step} did not converge (residual {residual:e})")]
    NoConvergence { step: usize, residual: f64 },

    #[error("constraint multiplier solve failed at step {step}")]
    ProjectionFailure { step: usize },

    #[error("t = {t} lies beyond the blow-up time {blowup}")]
    OutOfDomain { t: f64, blowup: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
