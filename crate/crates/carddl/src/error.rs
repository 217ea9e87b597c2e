use crate::syntax::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    /// A configured cap (regions, types, branches, time) was hit before a verdict.
    #[error("resource limit exceeded: {0}")]
    ResourceExceeded(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    /// An internal check failed; indicates a bug rather than a property of the input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::ResourceExceeded(_))
    }
}
