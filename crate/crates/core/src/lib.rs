//! Simulation library for linear-probing hash table insertion strategies.
//!
//! Six strategies over a single cyclic table of n cells: the classic
//! one-choice probe walk, and five two-choice variants that pick between
//! two uniformly drawn starting cells. Three of the variants consult
//! per-block counters (block size beta) instead of inspecting cells.
//!
//! The harness runs seeded experiments (iterations x simulations),
//! reports insertion cost, successful search cost, and cluster structure,
//! and emits CSV or JSON. Everything is deterministic given the master
//! seed.

pub mod blocking;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod oracles;
pub mod rng;
pub mod strategies;
pub mod table;

pub use blocking::{BlockLayout, BlockPolicy, CounterKind};
pub use error::{Error, Result};
pub use harness::{
    emit_report, keys_for, parse_json_report, run_experiment, run_experiment_sequential,
    run_one, run_simulation, ExperimentConfig, ExperimentReport, MetricSummary, ReportFormat,
    SimulationTrace,
};
pub use metrics::{summarize_run, RunIdentity, RunMetrics};
pub use oracles::{greedy_mc, naive_replay, GreedyMcOutcome, MirroredChoices, NaiveRun};
pub use rng::{derive_seed, mix64, RngStream, TieBreaker};
pub use strategies::{
    insert, search_successful, search_unsuccessful, InsertOutcome, KeyChoices, StrategyId,
};
pub use table::{ClusterCensus, ClusterSpan, TableState};
