use thiserror::Error;

/// Failure modes shared by every module of the crate.
///
/// The variants split into two families that the CLI maps to distinct exit
/// codes: malformed or out-of-range input, and violated mathematical
/// preconditions (for example asking for the discriminant form of an odd
/// lattice).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not represented: {0}")]
    NotRepresented(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for errors caused by the caller's data rather than by the math.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidInput(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
