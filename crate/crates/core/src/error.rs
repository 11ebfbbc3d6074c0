use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Nonpositive length, cutoff, or other argument outside the mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Malformed tabulated input (unsorted, negative, duplicated values).
    #[error("validation error: {0}")]
    Validation(String),
    /// Query above the cutoff of a stream; results would be silently truncated.
    #[error("range error: {0}")]
    Range(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Hypothesis of an estimate is not met by the supplied arguments.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("boundary condition mismatch: {0}")]
    BcMismatch(String),
    #[error("mode error: {0}")]
    Mode(String),
    #[error("case error: {0}")]
    Case(String),
    #[error("nothing to check: {0}")]
    NothingToCheck(String),
    #[error("undefined estimate: {0}")]
    UndefinedEstimate(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    /// Internal consistency failure, e.g. a weighted lattice count that is not an integer.
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Stable machine-readable code, used in CLI error JSON and by the C API.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Validation(_) => "validation",
            Error::Range(_) => "range",
            Error::Precondition(_) => "precondition",
            Error::Hypothesis(_) => "hypothesis",
            Error::Config(_) => "config",
            Error::BcMismatch(_) => "bc_mismatch",
            Error::Mode(_) => "mode",
            Error::Case(_) => "case",
            Error::NothingToCheck(_) => "nothing_to_check",
            Error::UndefinedEstimate(_) => "undefined_estimate",
            Error::Overflow(_) => "overflow",
            Error::Internal(_) => "internal",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}

pub(crate) fn ensure_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be a positive finite number, got {x}"
        )))
    }
}
