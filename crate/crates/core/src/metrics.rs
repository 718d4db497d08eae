//! Per-run statistics over the m inserted keys.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::strategies::StrategyId;
use crate::table::ClusterCensus;

/// Identity of one simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunIdentity {
    pub strategy: StrategyId,
    pub n: usize,
    pub m: usize,
    pub beta: Option<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub identity: RunIdentity,
    pub insert_avg: f64,
    pub insert_max: u64,
    pub search_avg: f64,
    pub search_max: u64,
    pub cluster_avg: f64,
    pub cluster_max: usize,
    /// 2 * cluster_max + 2: the unsuccessful-search bound for two-way
    /// linear strategies.
    pub unsuccessful_bound: u64,
}

/// Exact means (integer sums) and maxima of the per-key probe counts.
/// `cluster_avg` is the mean over clusters, not over keys.
pub fn summarize_run(
    insert_times: &[u64],
    search_times: &[u64],
    census: &ClusterCensus,
    identity: RunIdentity,
) -> Result<RunMetrics> {
    if insert_times.is_empty() || search_times.len() != insert_times.len() {
        return Err(Error::EmptyRun);
    }
    let m = insert_times.len() as f64;
    let cluster_max = census.max_size;
    Ok(RunMetrics {
        identity,
        insert_avg: insert_times.iter().sum::<u64>() as f64 / m,
        insert_max: insert_times.iter().copied().max().unwrap(),
        search_avg: search_times.iter().sum::<u64>() as f64 / m,
        search_max: search_times.iter().copied().max().unwrap(),
        cluster_avg: census.mean_size,
        cluster_max,
        unsuccessful_bound: 2 * cluster_max as u64 + 2,
    })
}
