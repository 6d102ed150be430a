use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported instance J({n},{k}): the distance chain is degenerate")]
    UnsupportedInstance { n: usize, k: usize },

    #[error("resource limit exceeded: {what} = {actual} > {limit}")]
    Resource { what: &'static str, actual: u128, limit: u128 },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
