use thiserror::Error;

use crate::semiring::SemiringKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("semiring mismatch: {0} vs {1}")]
    KindMismatch(SemiringKind, SemiringKind),

    #[error("division by the zero element of the {0} semiring")]
    DivisionByZero(SemiringKind),

    #[error("{op} is not supported over the {kind} semiring")]
    Unsupported {
        op: &'static str,
        kind: SemiringKind,
    },

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("alphabets differ")]
    AlphabetMismatch,

    #[error("automaton is not trim; trim it first")]
    NotTrim,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("pre-disambiguation exceeded the state limit of {limit}; the input may not be pre-disambiguable")]
    NotPredisambiguable { limit: usize },

    #[error(
        "determinization exceeded the state limit of {limit}; the input may not be determinizable"
    )]
    NotDeterminizedWithinLimit { limit: usize },

    #[error("transition removal changed the accepted language at `{word}`")]
    RemovalChangedLanguage { word: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by hitting a construction size limit.
    pub fn is_limit(&self) -> bool {
        matches!(
            self,
            Error::NotPredisambiguable { .. } | Error::NotDeterminizedWithinLimit { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
