use thiserror::Error;

/// Everything that can go wrong inside the library.
///
/// Verification *failures* (a bound that does not hold) are never errors;
/// they are reported through verdict fields. Errors mean a computation could
/// not be carried out as requested.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate phase: 2θ + {k}α is an integer")]
    DegeneratePhase { k: i64 },

    #[error("degenerate argument: sin π(x + {k}α) vanishes")]
    DegenerateArgument { k: i64 },

    #[error("phase construction failed: resonance {earlier} disturbed by correction at {later}")]
    ConstructionFailed { earlier: i64, later: i64 },

    #[error("box [{a}, {b}] is singular at this energy")]
    BoxSingular { a: i64, b: i64 },

    #[error("ill-conditioned eigenpair: glue mismatch {mismatch:e} after refinement")]
    IllConditionedEigenpair { mismatch: f64 },

    #[error("unverified hypothesis: site {y} could not be certified regular")]
    UnverifiedHypothesis { y: i64 },

    #[error("degenerate sample set: samples {i} and {j} have equal cosines")]
    DegenerateSet { i: usize, j: usize },

    #[error("not a resonance: potential mismatch {mismatch:e} exceeds {bound:e} for k = {k}")]
    NotAResonance { k: i64, mismatch: f64, bound: f64 },

    #[error("invalid regime: ln λ = {ln_lambda} is not below δ̂ = {delta_hat}")]
    InvalidRegime { ln_lambda: f64, delta_hat: f64 },

    #[error("profile window too small for hierarchy paths: {missing:?}")]
    Coverage { missing: Vec<Vec<usize>> },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
