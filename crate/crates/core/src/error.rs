use thiserror::Error;

/// Errors raised by the library. Numeric payloads are widened to `f64` so the
/// type stays independent of the scalar parameter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GpcError {
    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("sampled functions live on different grids")]
    GridMismatch,

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("sample count {found} does not match grid node count {expected}")]
    SampleCount { expected: usize, found: usize },

    #[error("dimension {0} is not supported (prime dimension required)")]
    UnsupportedDimension(usize),

    #[error("expected a vector of length {expected}, got {found}")]
    WrongLength { expected: usize, found: usize },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("channel is not certified completely positive (worst margin {margin:e})")]
    UncertifiedChannel { margin: f64 },

    #[error("eigenvalue {alpha} is non-positive ({value:e}) at t = {t}; time-local generator is singular there")]
    NonPositiveEigenvalue { alpha: usize, t: f64, value: f64 },

    #[error("inverse Laplace transform did not converge at t = {t}: {coarse} vs {fine}")]
    LaplaceNonConvergence { t: f64, coarse: f64, fine: f64 },

    #[error("pole encountered at s = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("admissibility violated: {0}")]
    Admissibility(String),

    #[error("series did not converge after {terms} terms (last term {last:e})")]
    SeriesNonConvergence { terms: usize, last: f64 },

    #[error("{0} representation is not available for this function")]
    MissingRepresentation(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = GpcError> = std::result::Result<T, E>;
