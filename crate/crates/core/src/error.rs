use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("rejected: {reason} (certificate: {certificate})")]
    Rejected { reason: String, certificate: String },
    #[error("resource limit exceeded: {what} (limit {limit}, reached {partial})")]
    Resource {
        what: String,
        limit: usize,
        partial: usize,
    },
}

impl Error {
    pub fn resource(what: &str, limit: usize, partial: usize) -> Self {
        Error::Resource {
            what: what.to_string(),
            limit,
            partial,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
