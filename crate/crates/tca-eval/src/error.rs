use std::fmt;
use std::io;

/// Errors from generation, fitting, evaluation, and file handling.
#[derive(Debug)]
pub enum EvalError {
    /// An error bubbled up from the core clustering pipeline.
    Core(tca_core::Error),
    /// A fit was requested on an empty point set.
    EmptyPoints,
    /// Too few points for the requested model size.
    TooFewPoints { needed: usize, got: usize },
    /// Cross-validation needs at least three days.
    InsufficientDays { got: usize },
    /// The EM iteration produced a non-finite log-likelihood.
    NonFiniteLikelihood,
    /// A profile or schedule definition is inconsistent.
    InvalidConfig(String),
    /// A data file could not be parsed; line numbers are 1-based.
    Parse { line: usize, message: String },
    Io(io::Error),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Core(e) => write!(f, "{e}"),
            EvalError::EmptyPoints => write!(f, "no points to fit"),
            EvalError::TooFewPoints { needed, got } => {
                write!(f, "need at least {needed} points, got {got}")
            }
            EvalError::InsufficientDays { got } => {
                write!(f, "cross-validation needs at least 3 days, got {got}")
            }
            EvalError::NonFiniteLikelihood => write!(f, "EM log-likelihood is not finite"),
            EvalError::InvalidConfig(msg) => write!(f, "{msg}"),
            EvalError::Parse { line, message } => write!(f, "line {line}: {message}"),
            EvalError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for EvalError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            EvalError::Core(e) => Some(e),
            EvalError::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<tca_core::Error> for EvalError {
    fn from(e: tca_core::Error) -> Self {
        EvalError::Core(e)
    }
}

impl From<io::Error> for EvalError {
    fn from(e: io::Error) -> Self {
        EvalError::Io(e)
    }
}
