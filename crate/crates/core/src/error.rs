//! Error type shared by every module.

use thiserror::Error;

/// Convenience alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong before a verification verdict is reached.
///
/// Failed identities are *not* errors; they are report outcomes.
#[derive(Debug, Error)]
pub enum Error {
    /// A rational expression cannot be expanded in the requested direction.
    #[error("non-expandable: {0}")]
    NonExpandable(String),
    /// Truncation left no cell whose value is exactly known.
    #[error("empty safe window: {0}")]
    EmptySafeWindow(String),
    /// A series has a singular order-0 coefficient.
    #[error("series not invertible: {0}")]
    SeriesNotInvertible(String),
    /// A matrix over the rational-expression field is singular.
    #[error("matrix not invertible: {0}")]
    NotInvertible(String),
    /// The crossing-parameter search found no candidate.
    #[error("no crossing parameters on the search grid")]
    NoSolution,
    /// Malformed input text, with a 1-based location.
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax {
        /// 1-based line.
        line: usize,
        /// 1-based column.
        col: usize,
        /// What was expected or found.
        msg: String,
    },
    /// A relation refers to a current missing from the binding environment.
    #[error("unknown current `{0}`")]
    UnknownCurrent(String),
    /// A coefficient does not factor into admissible atoms.
    #[error("coefficient is not a product of admissible atoms: {0}")]
    NonFactorableCoefficient(String),
    /// A tensor leg index is out of range.
    #[error("bad tensor leg {leg} for {legs} legs")]
    BadLeg {
        /// Requested leg (1-based).
        leg: usize,
        /// Number of tensor factors.
        legs: usize,
    },
    /// Structurally invalid input (R-matrix document, suite contents, ...).
    #[error("invalid input: {0}")]
    Invalid(String),
    /// JSON (de)serialization failure.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    /// File access failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Builds a syntax error from a byte offset into `text`.
    pub fn syntax_at(text: &str, offset: usize, msg: impl Into<String>) -> Error {
        let (line, col) = line_col(text, offset);
        Error::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }
}

/// 1-based line and column (in characters) of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before
        .rsplit('\n')
        .next()
        .map(|l| l.chars().count())
        .unwrap_or(0)
        + 1;
    (line, col)
}
