use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("invalid interval [{0}, {1}]: need s < t")]
    InvalidInterval(i64, i64),
    #[error("interval list is not canonical: {0}")]
    NonCanonical(String),
    #[error("sequence does not cover Path_{k}")]
    InvalidCovering { k: i64 },
    #[error("invalid index set for m = {m}: {reason}")]
    InvalidIndexSet { m: usize, reason: String },
    #[error("not a shift permutation: {0}")]
    InvalidShift(String),
    #[error("resource limit exceeded: {what} = {got} > {limit}")]
    ResourceLimit {
        what: &'static str,
        got: u64,
        limit: u64,
    },
    #[error("arity error: {0}")]
    Arity(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("sequence is not vec-delta greedy at position {0}")]
    NotGreedy(usize),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, LabError>;

pub(crate) fn check_limit(what: &'static str, got: u64, limit: u64) -> Result<()> {
    if got > limit {
        Err(LabError::ResourceLimit { what, got, limit })
    } else {
        Ok(())
    }
}
