use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Every cell is occupied; no probe walk can terminate.
    #[error("table is full")]
    FullTable,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Block-size formulas need log2 log2 n > 0.
    #[error("table size {0} too small (need n >= 4)")]
    NTooSmall(usize),

    #[error("run has no keys")]
    EmptyRun,

    /// A recorded key could not be found by search replay. This cannot
    /// happen for keys inserted through the strategies and signals a bug.
    #[error("key {0} not found during search replay")]
    KeyNotFound(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
