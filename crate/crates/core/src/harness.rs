//! The experiment protocol: seeded simulations grouped into iterations,
//! aggregation (mean over simulations within an iteration, then mean over
//! iterations), and CSV / JSON report emission.
//!
//! Reports are a pure function of the configuration: each simulation's
//! RNG stream is derived statelessly from (master seed, iteration,
//! simulation), and the reduction runs in index order, so sequential and
//! parallel execution produce byte-identical output.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blocking::{BlockLayout, BlockPolicy};
use crate::error::{Error, Result};
use crate::metrics::{summarize_run, RunIdentity, RunMetrics};
use crate::rng::{derive_seed, RngStream};
use crate::strategies::{insert, search_successful, InsertOutcome, KeyChoices, StrategyId};
use crate::table::TableState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub strategy: StrategyId,
    pub n: usize,
    pub alpha: f64,
    /// Block policy for the blocked strategies; defaults to the
    /// simulation formula floor((1-alpha)^-1 log2 log2 n) when omitted.
    pub block_policy: Option<BlockPolicy>,
    pub iterations: usize,
    pub sims_per_iteration: usize,
    pub master_seed: u64,
}

impl ExperimentConfig {
    pub fn keys(&self) -> usize {
        keys_for(self.n, self.alpha)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParams(format!(
                "load factor must be in (0,1), got {}",
                self.alpha
            )));
        }
        if self.iterations == 0 || self.sims_per_iteration == 0 {
            return Err(Error::InvalidParams(
                "iterations and sims must be >= 1".into(),
            ));
        }
        if self.keys() == 0 {
            return Err(Error::EmptyRun);
        }
        Ok(())
    }

    /// Block size this configuration resolves to, if the strategy uses one.
    pub fn resolved_beta(&self) -> Result<Option<usize>> {
        if !self.strategy.is_blocked() {
            return Ok(None);
        }
        let policy = self.block_policy.unwrap_or(BlockPolicy::Simulation);
        policy.block_size(self.n, self.alpha).map(Some)
    }
}

/// m = floor(alpha * n)
pub fn keys_for(n: usize, alpha: f64) -> usize {
    (alpha * n as f64).floor() as usize
}

/// Everything one simulation produced, for differential testing.
pub struct SimulationTrace {
    pub table: TableState,
    pub layout: Option<BlockLayout>,
    pub choices: Vec<KeyChoices>,
    pub outcomes: Vec<InsertOutcome>,
    pub insert_times: Vec<u64>,
    pub search_times: Vec<u64>,
    pub metrics: RunMetrics,
}

/// One simulation: fresh table, m key choices drawn up front, insertion
/// via the strategy, then successful-search replay for every key
/// post-construction, then a cluster census.
pub fn run_one(
    strategy: StrategyId,
    n: usize,
    alpha: f64,
    beta: Option<usize>,
    seed: u64,
) -> Result<SimulationTrace> {
    let m = keys_for(n, alpha);
    if m == 0 {
        return Err(Error::EmptyRun);
    }
    let mut rng = RngStream::from_seed(seed);
    let choices: Vec<KeyChoices> = (0..m)
        .map(|key_id| KeyChoices {
            key_id: key_id as u64,
            first: rng.uniform(n),
            second: rng.uniform(n),
        })
        .collect();

    let mut table = TableState::new(n);
    let mut layout = match (strategy.counter_kind(), beta) {
        (Some(kind), Some(beta)) => Some(BlockLayout::new(n, beta, kind)),
        (Some(_), None) => {
            return Err(Error::InvalidParams(format!("{strategy} needs a block size")))
        }
        (None, _) => None,
    };

    let mut outcomes = Vec::with_capacity(m);
    let mut insert_times = Vec::with_capacity(m);
    for ch in &choices {
        let out = insert(strategy, &mut table, layout.as_mut(), *ch, &mut rng)?;
        insert_times.push(out.probes_total);
        outcomes.push(out);
    }
    let search_times: Vec<u64> = choices
        .iter()
        .map(|ch| search_successful(strategy, &table, layout.as_ref(), ch))
        .collect::<Result<_>>()?;

    let metrics = summarize_run(
        &insert_times,
        &search_times,
        &table.cluster_census(),
        RunIdentity {
            strategy,
            n,
            m,
            beta,
            seed,
        },
    )?;
    Ok(SimulationTrace {
        table,
        layout,
        choices,
        outcomes,
        insert_times,
        search_times,
        metrics,
    })
}

/// One simulation of an experiment, identified by iteration and
/// simulation index.
pub fn run_simulation(
    config: &ExperimentConfig,
    iteration: usize,
    simulation: usize,
) -> Result<RunMetrics> {
    config.validate()?;
    let beta = config.resolved_beta()?;
    let seed = derive_seed(config.master_seed, iteration as u64, simulation as u64);
    run_one(config.strategy, config.n, config.alpha, beta, seed).map(|t| t.metrics)
}

/// Aggregated values of the six reported statistics. Maxima are averaged
/// over runs, so they are fractional at this level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub insert_avg: f64,
    pub insert_max: f64,
    pub search_avg: f64,
    pub search_max: f64,
    pub cluster_avg: f64,
    pub cluster_max: f64,
    pub unsuccessful_bound: f64,
}

impl MetricSummary {
    fn from_run(run: &RunMetrics) -> Self {
        MetricSummary {
            insert_avg: run.insert_avg,
            insert_max: run.insert_max as f64,
            search_avg: run.search_avg,
            search_max: run.search_max as f64,
            cluster_avg: run.cluster_avg,
            cluster_max: run.cluster_max as f64,
            unsuccessful_bound: run.unsuccessful_bound as f64,
        }
    }

    fn mean(items: &[MetricSummary]) -> Self {
        let k = items.len() as f64;
        let mut acc = [0.0f64; 7];
        for it in items {
            for (a, v) in acc.iter_mut().zip(it.fields()) {
                *a += v;
            }
        }
        MetricSummary::from_fields(acc.map(|v| v / k))
    }

    fn std_dev(items: &[MetricSummary], mean: &MetricSummary) -> Self {
        if items.len() < 2 {
            return MetricSummary::from_fields([0.0; 7]);
        }
        let k = (items.len() - 1) as f64;
        let mu = mean.fields();
        let mut acc = [0.0f64; 7];
        for it in items {
            for ((a, v), m) in acc.iter_mut().zip(it.fields()).zip(mu) {
                *a += (v - m) * (v - m);
            }
        }
        MetricSummary::from_fields(acc.map(|v| (v / k).sqrt()))
    }

    fn fields(&self) -> [f64; 7] {
        [
            self.insert_avg,
            self.insert_max,
            self.search_avg,
            self.search_max,
            self.cluster_avg,
            self.cluster_max,
            self.unsuccessful_bound,
        ]
    }

    fn from_fields(f: [f64; 7]) -> Self {
        MetricSummary {
            insert_avg: f[0],
            insert_max: f[1],
            search_avg: f[2],
            search_max: f[3],
            cluster_avg: f[4],
            cluster_max: f[5],
            unsuccessful_bound: f[6],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationSummary {
    /// 1-based iteration index.
    pub iteration: usize,
    pub stats: MetricSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub strategy: StrategyId,
    pub n: usize,
    pub alpha: f64,
    pub block_size: Option<usize>,
    pub iterations: usize,
    pub sims_per_iteration: usize,
    pub master_seed: u64,
    pub per_iteration: Vec<IterationSummary>,
    /// Mean of the iteration means.
    pub grand: MetricSummary,
    /// Sample standard deviation across iterations.
    pub std_dev: MetricSummary,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment_with(config, true)
}

/// Sequential twin of [`run_experiment`]; exists so the parallel
/// equivalence contract is testable.
pub fn run_experiment_sequential(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment_with(config, false)
}

fn run_experiment_with(config: &ExperimentConfig, parallel: bool) -> Result<ExperimentReport> {
    config.validate()?;
    let beta = config.resolved_beta()?;
    let indices: Vec<(usize, usize)> = (0..config.iterations)
        .flat_map(|it| (0..config.sims_per_iteration).map(move |sim| (it, sim)))
        .collect();
    let run = |&(it, sim): &(usize, usize)| -> Result<RunMetrics> {
        let seed = derive_seed(config.master_seed, it as u64, sim as u64);
        run_one(config.strategy, config.n, config.alpha, beta, seed).map(|t| t.metrics)
    };
    let runs: Vec<RunMetrics> = if parallel {
        indices.par_iter().map(run).collect::<Result<_>>()?
    } else {
        indices.iter().map(run).collect::<Result<_>>()?
    };

    let per_iteration: Vec<IterationSummary> = runs
        .chunks(config.sims_per_iteration)
        .enumerate()
        .map(|(i, chunk)| {
            let sims: Vec<MetricSummary> = chunk.iter().map(MetricSummary::from_run).collect();
            IterationSummary {
                iteration: i + 1,
                stats: MetricSummary::mean(&sims),
            }
        })
        .collect();
    let iteration_stats: Vec<MetricSummary> =
        per_iteration.iter().map(|it| it.stats).collect();
    let grand = MetricSummary::mean(&iteration_stats);
    let std_dev = MetricSummary::std_dev(&iteration_stats, &grand);
    Ok(ExperimentReport {
        strategy: config.strategy,
        n: config.n,
        alpha: config.alpha,
        block_size: beta,
        iterations: config.iterations,
        sims_per_iteration: config.sims_per_iteration,
        master_seed: config.master_seed,
        per_iteration,
        grand,
        std_dev,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    JsonLike,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json-like" | "json" => Ok(ReportFormat::JsonLike),
            other => Err(Error::InvalidParams(format!("unknown format {other:?}"))),
        }
    }
}

/// Format a float with 6 significant digits.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.00000".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let prec = (5 - exp).max(0) as usize;
    format!("{x:.prec$}")
}

pub const CSV_HEADER: &str = "strategy,n,alpha,block_size,iteration,insert_avg,insert_max,\
search_avg,search_max,cluster_avg,cluster_max,unsuccessful_bound,seed";

pub fn emit_report(report: &ExperimentReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => emit_csv(report),
        ReportFormat::JsonLike => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

fn emit_csv(report: &ExperimentReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let prefix = format!(
        "{},{},{},{}",
        report.strategy,
        report.n,
        fmt_sig(report.alpha),
        report.block_size.unwrap_or(0)
    );
    let row = |label: &str, s: &MetricSummary| {
        format!(
            "{prefix},{label},{},{},{},{},{},{},{},{}\n",
            fmt_sig(s.insert_avg),
            fmt_sig(s.insert_max),
            fmt_sig(s.search_avg),
            fmt_sig(s.search_max),
            fmt_sig(s.cluster_avg),
            fmt_sig(s.cluster_max),
            fmt_sig(s.unsuccessful_bound),
            report.master_seed
        )
    };
    for it in &report.per_iteration {
        out.push_str(&row(&it.iteration.to_string(), &it.stats));
    }
    out.push_str(&row("all", &report.grand));
    out
}

pub fn parse_json_report(s: &str) -> Result<ExperimentReport> {
    serde_json::from_str(s)
        .map_err(|e| Error::InvalidParams(format!("bad report document: {e}")))
}
