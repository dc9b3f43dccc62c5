use thiserror::Error;

/// Failure modes shared by every analysis in the crate.
///
/// The variants mirror how a caller should react: `Input` and `Incomplete`
/// mean the problem description must be fixed, while `Degenerate`,
/// `Separation` and `Truncation` mean the numbers at hand do not support a
/// verdict either way.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("root separation: {0}")]
    Separation(String),
    #[error("truncation: {0}")]
    Truncation(String),
    #[error("incomplete input: {0}")]
    Incomplete(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }

    /// True for the variants that signal a numerically undecidable sample
    /// rather than a malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Degenerate(_) | Error::Separation(_) | Error::Truncation(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
