use std::process::Command;

fn lpsim(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_lpsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn run_emits_csv_with_pinned_header() {
    let out = lpsim(&[
        "run",
        "--strategy",
        "classic",
        "--n",
        "1024",
        "--alpha",
        "0.4",
        "--iterations",
        "2",
        "--sims",
        "5",
        "--seed",
        "42",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "strategy,n,alpha,block_size,iteration,insert_avg,insert_max,search_avg,search_max,\
cluster_avg,cluster_max,unsuccessful_bound,seed"
    );
    // 2 iteration rows + grand row
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("classic,1024,0.400000,0,1,"));
    assert!(rows[2].contains(",all,"));
    assert!(rows[2].ends_with(",42"));
}

#[test]
fn run_is_reproducible_and_json_round_trips() {
    let args = [
        "run",
        "--strategy",
        "walkfirst",
        "--n",
        "512",
        "--alpha",
        "0.9",
        "--iterations",
        "2",
        "--sims",
        "3",
        "--seed",
        "7",
        "--format",
        "json-like",
    ];
    let a = lpsim(&args);
    let b = lpsim(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let parsed = lpsim_core::parse_json_report(std::str::from_utf8(&a.stdout).unwrap()).unwrap();
    assert_eq!(parsed.strategy, lpsim_core::StrategyId::WalkFirst);
    assert_eq!(parsed.per_iteration.len(), 2);
}

#[test]
fn oracle_replay_passes_for_all_strategies() {
    for strategy in [
        "classic",
        "shortseq",
        "smallcluster",
        "locallylinear",
        "decidefirst",
        "walkfirst",
    ] {
        let out = lpsim(&[
            "oracle",
            "--check",
            "replay",
            "--strategy",
            strategy,
            "--n",
            "1024",
            "--alpha",
            "0.9",
            "--seed",
            "3",
        ]);
        assert!(
            out.status.success(),
            "replay check failed for {strategy}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn oracle_greedymc_passes() {
    let out = lpsim(&[
        "oracle",
        "--check",
        "greedymc",
        "--strategy",
        "locallylinear",
        "--n",
        "1024",
        "--alpha",
        "0.4",
        "--seed",
        "9",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn reproduce_emits_grid_rows() {
    let out = lpsim(&["reproduce", "--table", "1", "--seed", "1", "--max-n", "256"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    // header + 3 strategies x 1 size x 2 load factors
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("classic,256,0.400000,"));
    assert!(lines[6].starts_with("smallcluster,256,0.900000,"));
}

#[test]
fn invalid_arguments_exit_nonzero() {
    let out = lpsim(&[
        "run",
        "--strategy",
        "classic",
        "--n",
        "1024",
        "--alpha",
        "1.5",
    ]);
    assert!(!out.status.success());
    let out = lpsim(&[
        "oracle",
        "--check",
        "greedymc",
        "--strategy",
        "classic",
        "--n",
        "64",
        "--alpha",
        "0.4",
    ]);
    assert!(!out.status.success());
}
