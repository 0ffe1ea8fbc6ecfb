use thiserror::Error;

/// Errors surfaced by the library. Check failures are not errors; they are
/// reported through [`crate::verify::VerificationReport`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrlabError {
    #[error("growth function is not convex: secant slopes decrease near t = {at}")]
    NotConvex { at: f64 },
    #[error("conjugate supremum diverges at s = {s}")]
    RangeError { s: f64 },
    #[error("growth function vanishes or is not finite at t = {t}")]
    DomainError { t: f64 },
    #[error("index and Dini criteria disagree (index says {index}, Dini says {dini})")]
    InconsistentCriteria { index: bool, dini: bool },
    #[error("{0} is not an N-function")]
    NotNFunction(String),
    #[error("modular is infinite for every probed lambda")]
    NonFinite,
    #[error("complementary function unavailable: {0}")]
    ConjugateUnavailable(String),
    #[error("grid specs differ")]
    SpecMismatch,
    #[error("method preconditions violated: {0}")]
    MethodMismatch(String),
    #[error("input has imaginary part {0:e}, expected real data")]
    ComplexInput(f64),
    #[error("average over the support hull exceeds lambda; no maximal intervals")]
    NotLocalized,
    #[error("t_k search left the log-domain cap at term {reached}")]
    SearchOverflow { reached: usize },
    #[error("Dini domination holds; no counterexample exists")]
    DominationHolds,
    #[error("unsupported input: {0}")]
    CorpusError(String),
    #[error("{fraction:.3} of the angular grid maps outside the stored panel")]
    CoverageTooLow { fraction: f64 },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, OrlabError>;

impl From<std::io::Error> for OrlabError {
    fn from(e: std::io::Error) -> Self {
        OrlabError::Io(e.to_string())
    }
}

impl From<csv::Error> for OrlabError {
    fn from(e: csv::Error) -> Self {
        OrlabError::Parse(e.to_string())
    }
}
