use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Agent or object index outside the instance.
    #[error("index error: {0}")]
    Index(String),
    /// Input outside the domain of an operation (e.g. an empty object set).
    #[error("domain error: {0}")]
    Domain(String),
    /// An exhaustive procedure would exceed its size guard.
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// A soundness check on computed output failed.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Guard used by every exhaustive scan over the `N^M` allocations.
pub const MAX_ALLOCATIONS: u64 = 1_000_000;

pub(crate) fn check_allocation_space(num_agents: usize, num_objects: usize) -> Result<u64> {
    let mut total: u64 = 1;
    for _ in 0..num_objects {
        total = total.saturating_mul(num_agents as u64);
        if total > MAX_ALLOCATIONS {
            return Err(Error::Capacity(format!(
                "{num_agents}^{num_objects} allocations exceed the limit of {MAX_ALLOCATIONS}"
            )));
        }
    }
    Ok(total)
}

pub(crate) fn check_subset_space(num_objects: usize, limit: usize, what: &str) -> Result<()> {
    if num_objects > limit {
        return Err(Error::Capacity(format!(
            "{what} enumerates 2^{num_objects} bundles; limit is {limit} objects"
        )));
    }
    Ok(())
}
