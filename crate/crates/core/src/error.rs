use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("zero dispersion gives no passband")]
    NoPassband,

    #[error("delay·dispersion = {product:e} s³ must be positive for a positive-frequency passband")]
    PassbandSign { product: f64 },

    #[error("operation requires a {expected} scheme, got {found}")]
    WrongScheme { expected: &'static str, found: String },

    #[error("frequency grid too coarse: step {step:e} Hz exceeds {limit:e} Hz")]
    GridTooCoarse { step: f64, limit: f64 },

    #[error("simulation grid violates sampling requirement: {0}")]
    SamplingViolation(String),

    #[error("segment length {segment} exceeds sequence length {len}")]
    SegmentTooLong { segment: usize, len: usize },

    #[error("at least {min} realizations required, got {got}")]
    InsufficientRealizations { min: usize, got: usize },

    #[error("outside formula domain: {0}")]
    OutsideDomain(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { field, reason: reason.into() }
    }

    /// True for errors caused by a physically or mathematically impossible
    /// operating point, as opposed to malformed input.
    pub fn is_domain_error(&self) -> bool {
        matches!(
            self,
            Error::NoPassband | Error::PassbandSign { .. } | Error::OutsideDomain(_)
        )
    }
}

pub(crate) fn ensure_finite(field: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::invalid(field, format!("must be finite, got {x}")))
    }
}
