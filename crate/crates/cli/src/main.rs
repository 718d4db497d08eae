use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lpsim_core::{
    emit_report, greedy_mc, naive_replay, run_experiment, run_one, BlockPolicy,
    ExperimentConfig, MirroredChoices, ReportFormat, RngStream, StrategyId,
};

#[derive(Parser)]
#[command(name = "lpsim", version, about = "Linear-probing strategy simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and emit a report.
    Run(RunArgs),
    /// Emit a published results grid for several strategies and table sizes.
    Reproduce(ReproduceArgs),
    /// Cross-check the optimized implementation against a naive replay.
    Oracle(OracleArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Simulation,
    B1,
    B2,
    B3,
    Explicit,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_parser = parse_strategy)]
    strategy: StrategyId,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    alpha: f64,
    #[arg(long, value_enum)]
    block_policy: Option<PolicyArg>,
    /// Block size for --block-policy explicit.
    #[arg(long)]
    beta: Option<usize>,
    /// Slack parameter for --block-policy b3 (must satisfy 2*alpha < delta < 1).
    #[arg(long)]
    delta: Option<f64>,
    /// Additive constant for --block-policy b1.
    #[arg(long, default_value_t = 0.0)]
    c: f64,
    /// Additive constant for --block-policy b2.
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    #[arg(long, default_value_t = 10)]
    iterations: usize,
    #[arg(long, default_value_t = 100)]
    sims: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "csv")]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Which results table to regenerate (1-5).
    #[arg(long)]
    table: u8,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest table size to include (default 2^16).
    #[arg(long, default_value_t = 1 << 16)]
    max_n: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OracleCheck {
    Replay,
    Greedymc,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_enum)]
    check: OracleCheck,
    #[arg(long, value_parser = parse_strategy)]
    strategy: StrategyId,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn parse_strategy(s: &str) -> Result<StrategyId, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Run(args) => cmd_run(args),
        Command::Reproduce(args) => cmd_reproduce(args),
        Command::Oracle(args) => cmd_oracle(args),
    }
}

fn resolve_policy(args: &RunArgs) -> Result<Option<BlockPolicy>> {
    let policy = match args.block_policy {
        None => return Ok(None),
        Some(PolicyArg::Simulation) => BlockPolicy::Simulation,
        Some(PolicyArg::B1) => BlockPolicy::TheoremB1 { c: args.c },
        Some(PolicyArg::B2) => BlockPolicy::TheoremB2 { eta: args.eta },
        Some(PolicyArg::B3) => {
            let delta = args
                .delta
                .context("--block-policy b3 requires --delta")?;
            BlockPolicy::TheoremB3 { delta }
        }
        Some(PolicyArg::Explicit) => {
            let beta = args.beta.context("--block-policy explicit requires --beta")?;
            BlockPolicy::Explicit(beta)
        }
    };
    Ok(Some(policy))
}

fn cmd_run(args: RunArgs) -> Result<ExitCode> {
    let format: ReportFormat = args.format.parse()?;
    let config = ExperimentConfig {
        strategy: args.strategy,
        n: args.n,
        alpha: args.alpha,
        block_policy: resolve_policy(&args)?,
        iterations: args.iterations,
        sims_per_iteration: args.sims,
        master_seed: args.seed,
    };
    let report = run_experiment(&config)?;
    let doc = emit_report(&report, format);
    match &args.out {
        Some(path) => fs::write(path, doc).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{doc}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<ExitCode> {
    let strategies: &[StrategyId] = match args.table {
        1 | 2 => &[
            StrategyId::Classic,
            StrategyId::ShortSeq,
            StrategyId::SmallCluster,
        ],
        3 | 4 | 5 => &[
            StrategyId::LocallyLinear,
            StrategyId::WalkFirst,
            StrategyId::DecideFirst,
        ],
        t => bail!("unknown table {t}; expected 1-5"),
    };
    let sizes: Vec<usize> = [8usize, 12, 16, 20, 22]
        .iter()
        .map(|&p| 1usize << p)
        .filter(|&n| n <= args.max_n)
        .collect();
    if sizes.is_empty() {
        bail!("--max-n {} admits no table size (smallest is 256)", args.max_n);
    }
    println!("{}", lpsim_core::harness::CSV_HEADER);
    for &strategy in strategies {
        for &n in &sizes {
            for alpha in [0.4, 0.9] {
                let config = ExperimentConfig {
                    strategy,
                    n,
                    alpha,
                    block_policy: None,
                    iterations: 10,
                    sims_per_iteration: 100,
                    master_seed: args.seed,
                };
                let report = run_experiment(&config)?;
                // grand-total row only; the grid is one line per cell
                let csv = emit_report(&report, ReportFormat::Csv);
                let grand = csv.lines().last().unwrap();
                println!("{grand}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(args: OracleArgs) -> Result<ExitCode> {
    let beta = if args.strategy.is_blocked() {
        Some(BlockPolicy::Simulation.block_size(args.n, args.alpha)?)
    } else {
        None
    };
    match args.check {
        OracleCheck::Replay => {
            let fast = run_one(args.strategy, args.n, args.alpha, beta, args.seed)?;
            let naive = naive_replay(args.strategy, args.n, args.alpha, beta, args.seed)?;
            let mut ok = true;
            if fast.table.cells() != naive.cells.as_slice() {
                eprintln!("mismatch: final occupancy differs");
                ok = false;
            }
            if fast.outcomes != naive.outcomes {
                eprintln!("mismatch: insertion outcomes differ");
                ok = false;
            }
            if fast.metrics != naive.metrics {
                eprintln!("mismatch: run metrics differ");
                ok = false;
            }
            if ok {
                println!(
                    "replay ok: {} n={} alpha={} seed={} ({} keys)",
                    args.strategy,
                    args.n,
                    args.alpha,
                    args.seed,
                    fast.outcomes.len()
                );
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::FAILURE)
            }
        }
        OracleCheck::Greedymc => {
            if args.strategy != StrategyId::LocallyLinear {
                bail!("greedymc check applies to locallylinear only");
            }
            let beta = beta.unwrap();
            if args.n % beta != 0 {
                bail!("greedymc check needs beta | n (n={}, beta={beta})", args.n);
            }
            let fast = run_one(args.strategy, args.n, args.alpha, beta.into(), args.seed)?;
            let layout = fast.layout.as_ref().unwrap();
            if fast
                .outcomes
                .iter()
                .any(|o| layout.block_of(o.start_cell) != o.landing_block.unwrap())
            {
                println!(
                    "greedymc vacuous: overflow occurred (n={} alpha={} seed={})",
                    args.n, args.alpha, args.seed
                );
                return Ok(ExitCode::SUCCESS);
            }
            let m = fast.outcomes.len();
            let mut rng = RngStream::from_seed(args.seed);
            let bins = args.n / beta;
            let choices: Vec<Vec<usize>> = (0..m)
                .map(|_| vec![rng.uniform(args.n) / beta, rng.uniform(args.n) / beta])
                .collect();
            let mut stream = MirroredChoices::new(choices, rng);
            let outcome = greedy_mc(bins, m, 2, &mut stream);
            if layout.counters() == outcome.loads.as_slice() {
                println!(
                    "greedymc ok: loads match over {bins} bins (max {})",
                    outcome.max_load
                );
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("mismatch: block loads differ from greedy allocation");
                Ok(ExitCode::FAILURE)
            }
        }
    }
}
