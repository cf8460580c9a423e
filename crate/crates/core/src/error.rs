use crate::families::TorsionKind;

/// Errors raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("singular curve: discriminant is zero")]
    SingularCurve,
    #[error("factorisation incomplete: composite cofactor {0} left")]
    IncompleteFactorization(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("no seed triple for torsion {0}")]
    NoSeed(TorsionKind),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {message}")]
    Validation { line: usize, message: String },
    #[error("certificate rejected: {0}")]
    Certificate(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// The variant name, e.g. `HypothesisViolation`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::SingularCurve => "SingularCurve",
            Error::IncompleteFactorization(_) => "IncompleteFactorization",
            Error::HypothesisViolation(_) => "HypothesisViolation",
            Error::PreconditionViolation(_) => "PreconditionViolation",
            Error::NoSeed(_) => "NoSeed",
            Error::Inconclusive(_) => "Inconclusive",
            Error::Parse { .. } => "ParseError",
            Error::Validation { .. } => "ValidationError",
            Error::Certificate(_) => "CertificateError",
            Error::Io(_) => "IoError",
            Error::Json(_) => "JsonError",
        }
    }
}
