use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported constraint body: {0}")]
    UnsupportedBody(String),

    #[error("dual seminorm is infinite; no support point exists")]
    NoSupport,

    #[error("degenerate hypothesis: normal vector is zero")]
    DegenerateHypothesis,

    #[error("coverage error: point {point} has neighbor {neighbor} outside the tabulated domain")]
    Coverage { point: usize, neighbor: String },

    #[error("capacity exceeded: n = {n} is above the exhaustive cap {cap}; {hint}")]
    Capacity { n: usize, cap: usize, hint: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidInput(_) => "invalid_input",
            Error::Precondition(_) => "precondition",
            Error::UnsupportedBody(_) => "unsupported_body",
            Error::NoSupport => "no_support",
            Error::DegenerateHypothesis => "degenerate_hypothesis",
            Error::Coverage { .. } => "coverage",
            Error::Capacity { .. } => "capacity",
            Error::Parse(_) => "parse",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
