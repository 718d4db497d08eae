//! Independent brute-force references used for differential testing: a
//! deliberately simple strategy replayer that recomputes every block
//! counter by full scan, and a balls-into-bins greedy multiple-choice
//! simulator that mirrors a locally-linear run at the block level.
//!
//! The oracle shares the RNG *derivation* with the optimized path (same
//! seed, same draw order) but none of the code, so differential tests
//! isolate logic bugs rather than stream divergence.

use crate::error::{Error, Result};
use crate::metrics::{RunIdentity, RunMetrics};
use crate::rng::RngStream;
use crate::strategies::{InsertOutcome, KeyChoices, StrategyId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyMcOutcome {
    pub loads: Vec<u64>,
    pub max_load: u64,
}

/// Supplies d bin indices per ball plus tie-breaking bits.
pub trait ChoiceStream {
    fn next_choices(&mut self, d: usize, s: usize) -> Vec<usize>;
    fn tie_bit(&mut self) -> bool;
}

/// Greedy multiple-choice allocation: each of r balls goes to the least
/// loaded of its d chosen bins; a tie among the choices costs one bit
/// (false picks the earliest tied choice, true the latest).
pub fn greedy_mc(s: usize, r: usize, d: usize, stream: &mut dyn ChoiceStream) -> GreedyMcOutcome {
    assert!(s >= 1 && d >= 1);
    let mut loads = vec![0u64; s];
    for _ in 0..r {
        let choices = stream.next_choices(d, s);
        debug_assert_eq!(choices.len(), d);
        let min = choices.iter().map(|&b| loads[b]).min().unwrap();
        let tied: Vec<usize> = choices
            .iter()
            .copied()
            .filter(|&b| loads[b] == min)
            .collect();
        let winner = if tied.len() >= 2 {
            if stream.tie_bit() {
                *tied.last().unwrap()
            } else {
                tied[0]
            }
        } else {
            tied[0]
        };
        loads[winner] += 1;
    }
    let max_load = loads.iter().copied().max().unwrap_or(0);
    GreedyMcOutcome { loads, max_load }
}

/// Choice stream backed by an [`RngStream`], with all ball choices drawn
/// up front (the same order the harness draws key choices) and tie bits
/// taken from the stream afterwards during allocation.
pub struct MirroredChoices {
    pending: std::vec::IntoIter<Vec<usize>>,
    rng: RngStream,
}

impl MirroredChoices {
    pub fn new(choices: Vec<Vec<usize>>, rng: RngStream) -> Self {
        MirroredChoices {
            pending: choices.into_iter(),
            rng,
        }
    }
}

impl ChoiceStream for MirroredChoices {
    fn next_choices(&mut self, d: usize, _s: usize) -> Vec<usize> {
        let c = self.pending.next().expect("choice stream exhausted");
        debug_assert_eq!(c.len(), d);
        c
    }

    fn tie_bit(&mut self) -> bool {
        use crate::rng::TieBreaker;
        self.rng.tie_bit()
    }
}

/// Result of one naive run.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveRun {
    /// Final cell contents (key id per occupied cell).
    pub cells: Vec<Option<u64>>,
    pub outcomes: Vec<InsertOutcome>,
    pub metrics: RunMetrics,
}

/// Straight-line reimplementation of a whole simulation run. No
/// incremental counters: block loads and weights are recomputed by full
/// scan before every insertion, clusters by bidirectional walks.
pub fn naive_replay(
    strategy: StrategyId,
    n: usize,
    alpha: f64,
    beta: Option<usize>,
    seed: u64,
) -> Result<NaiveRun> {
    let m = (alpha * n as f64).floor() as usize;
    if m == 0 {
        return Err(Error::EmptyRun);
    }
    let beta = match (strategy.is_blocked(), beta) {
        (true, Some(b)) => Some(b),
        (true, None) => {
            return Err(Error::InvalidParams(format!("{strategy} needs a block size")))
        }
        (false, _) => None,
    };
    let mut rng = RngStream::from_seed(seed);
    let choices: Vec<KeyChoices> = (0..m)
        .map(|key_id| KeyChoices {
            key_id: key_id as u64,
            first: rng.uniform(n),
            second: rng.uniform(n),
        })
        .collect();

    let mut cells: Vec<Option<u64>> = vec![None; n];
    // Landing log for weight recomputation (DecideFirst).
    let mut landings: Vec<usize> = Vec::new();
    let mut outcomes = Vec::with_capacity(m);
    let mut insert_times = Vec::with_capacity(m);
    for ch in &choices {
        let out = naive_insert(strategy, &mut cells, beta, &landings, *ch, &mut rng)?;
        if let Some(b) = out.landing_block {
            if strategy == StrategyId::DecideFirst {
                landings.push(b);
            }
        }
        insert_times.push(out.probes_total);
        outcomes.push(out);
    }
    let search_times: Vec<u64> = choices
        .iter()
        .map(|ch| naive_search(strategy, &cells, beta, ch))
        .collect::<Result<_>>()?;

    let (cluster_max, cluster_avg) = naive_census(&cells);
    let metrics = RunMetrics {
        identity: RunIdentity {
            strategy,
            n,
            m,
            beta,
            seed,
        },
        insert_avg: insert_times.iter().sum::<u64>() as f64 / m as f64,
        insert_max: insert_times.iter().copied().max().unwrap(),
        search_avg: search_times.iter().sum::<u64>() as f64 / m as f64,
        search_max: search_times.iter().copied().max().unwrap(),
        cluster_avg,
        cluster_max,
        unsuccessful_bound: 2 * cluster_max as u64 + 2,
    };
    Ok(NaiveRun {
        cells,
        outcomes,
        metrics,
    })
}

fn naive_insert(
    strategy: StrategyId,
    cells: &mut Vec<Option<u64>>,
    beta: Option<usize>,
    landings: &[usize],
    ch: KeyChoices,
    rng: &mut RngStream,
) -> Result<InsertOutcome> {
    use crate::rng::TieBreaker;
    let n = cells.len();
    if cells.iter().all(|c| c.is_some()) {
        return Err(Error::FullTable);
    }
    let walk = |cells: &[Option<u64>], start: usize| -> (usize, u64) {
        let mut cell = start;
        let mut probes = 1u64;
        while cells[cell].is_some() {
            cell = (cell + 1) % n;
            probes += 1;
        }
        (cell, probes)
    };
    let cluster_size = |cells: &[Option<u64>], at: usize| -> u64 {
        if cells[at].is_none() {
            return 0;
        }
        let mut size = 1u64;
        let mut c = (at + n - 1) % n;
        while cells[c].is_some() {
            size += 1;
            c = (c + n - 1) % n;
        }
        let mut c = (at + 1) % n;
        while cells[c].is_some() {
            size += 1;
            c = (c + 1) % n;
        }
        size
    };
    let (i, j) = (ch.first, ch.second);
    match strategy {
        StrategyId::Classic => {
            let (cell, probes) = walk(cells, i);
            cells[cell] = Some(ch.key_id);
            Ok(InsertOutcome {
                cell,
                probes_total: probes,
                probes_winning: probes,
                landing_block: None,
                start_cell: i,
            })
        }
        StrategyId::ShortSeq => {
            let mut probes = 0u64;
            let starts: &[usize] = if i == j { &[i] } else { &[i, j] };
            for rank in 0..n as u64 {
                for &s in starts {
                    let cell = (s + rank as usize) % n;
                    probes += 1;
                    if cells[cell].is_none() {
                        cells[cell] = Some(ch.key_id);
                        return Ok(InsertOutcome {
                            cell,
                            probes_total: probes,
                            probes_winning: rank + 1,
                            landing_block: None,
                            start_cell: s,
                        });
                    }
                }
            }
            unreachable!()
        }
        StrategyId::SmallCluster => {
            if i == j {
                if cells[i].is_none() {
                    cells[i] = Some(ch.key_id);
                    return Ok(InsertOutcome {
                        cell: i,
                        probes_total: 1,
                        probes_winning: 1,
                        landing_block: None,
                        start_cell: i,
                    });
                }
                let total = cluster_size(cells, i) + 2;
                let (cell, w) = walk(cells, i);
                cells[cell] = Some(ch.key_id);
                return Ok(InsertOutcome {
                    cell,
                    probes_total: total,
                    probes_winning: w,
                    landing_block: None,
                    start_cell: i,
                });
            }
            match (cells[i].is_none(), cells[j].is_none()) {
                // both empty: first cell wins outright, no coin
                (true, true) => {
                    cells[i] = Some(ch.key_id);
                    Ok(InsertOutcome {
                        cell: i,
                        probes_total: 2,
                        probes_winning: 1,
                        landing_block: None,
                        start_cell: i,
                    })
                }
                (true, false) => {
                    cells[i] = Some(ch.key_id);
                    Ok(InsertOutcome {
                        cell: i,
                        probes_total: 2,
                        probes_winning: 1,
                        landing_block: None,
                        start_cell: i,
                    })
                }
                (false, true) => {
                    cells[j] = Some(ch.key_id);
                    Ok(InsertOutcome {
                        cell: j,
                        probes_total: 2,
                        probes_winning: 1,
                        landing_block: None,
                        start_cell: j,
                    })
                }
                (false, false) => {
                    let (si, sj) = (cluster_size(cells, i), cluster_size(cells, j));
                    let total = si + sj + 4;
                    let winner = if si < sj {
                        i
                    } else if sj < si {
                        j
                    } else if rng.tie_bit() {
                        j
                    } else {
                        i
                    };
                    let (cell, w) = walk(cells, winner);
                    cells[cell] = Some(ch.key_id);
                    Ok(InsertOutcome {
                        cell,
                        probes_total: total,
                        probes_winning: w,
                        landing_block: None,
                        start_cell: winner,
                    })
                }
            }
        }
        StrategyId::WalkFirst => {
            let beta = beta.unwrap();
            let load = |cells: &[Option<u64>], block: usize| -> u64 {
                block_cells(n, beta, block)
                    .filter(|&c| cells[c].is_some())
                    .count() as u64
            };
            let (u, pu) = walk(cells, i);
            if i == j {
                cells[u] = Some(ch.key_id);
                return Ok(InsertOutcome {
                    cell: u,
                    probes_total: pu,
                    probes_winning: pu,
                    landing_block: Some(u / beta),
                    start_cell: i,
                });
            }
            let (v, pv) = walk(cells, j);
            let (cell, pw, start) = if u == v {
                (u, pu, i)
            } else {
                let (lu, lv) = (load(cells, u / beta), load(cells, v / beta));
                let first = if lu < lv {
                    true
                } else if lv < lu {
                    false
                } else {
                    !rng.tie_bit()
                };
                if first {
                    (u, pu, i)
                } else {
                    (v, pv, j)
                }
            };
            cells[cell] = Some(ch.key_id);
            Ok(InsertOutcome {
                cell,
                probes_total: pu + pv,
                probes_winning: pw,
                landing_block: Some(cell / beta),
                start_cell: start,
            })
        }
        StrategyId::DecideFirst => {
            let beta = beta.unwrap();
            let weight =
                |block: usize| -> u64 { landings.iter().filter(|&&b| b == block).count() as u64 };
            let (bi, bj) = (i / beta, j / beta);
            let (start, landing) = if bi == bj {
                (i, bi)
            } else {
                let (wi, wj) = (weight(bi), weight(bj));
                if wi < wj {
                    (i, bi)
                } else if wj < wi {
                    (j, bj)
                } else if rng.tie_bit() {
                    (j, bj)
                } else {
                    (i, bi)
                }
            };
            let (cell, probes) = walk(cells, start);
            cells[cell] = Some(ch.key_id);
            Ok(InsertOutcome {
                cell,
                probes_total: probes,
                probes_winning: probes,
                landing_block: Some(landing),
                start_cell: start,
            })
        }
        StrategyId::LocallyLinear => {
            let beta = beta.unwrap();
            let num_blocks = n.div_ceil(beta);
            let load = |cells: &[Option<u64>], block: usize| -> usize {
                block_cells(n, beta, block)
                    .filter(|&c| cells[c].is_some())
                    .count()
            };
            let (bi, bj) = (i / beta, j / beta);
            let len_of = |block: usize| block_cells(n, beta, block).count();
            // relative fullness, as in the optimized implementation
            let ri = load(cells, bi) * len_of(bj);
            let rj = load(cells, bj) * len_of(bi);
            let start = if ri < rj {
                i
            } else if rj < ri {
                j
            } else if rng.tie_bit() {
                j
            } else {
                i
            };
            let mut block = start / beta;
            let mut from = start;
            let mut probes = 0u64;
            loop {
                let len = block_cells(n, beta, block).count();
                let full = load(cells, block) == len;
                if !full {
                    let base = block * beta;
                    for k in 0..len {
                        let cell = base + (from - base + k) % len;
                        probes += 1;
                        if cells[cell].is_none() {
                            cells[cell] = Some(ch.key_id);
                            return Ok(InsertOutcome {
                                cell,
                                probes_total: probes,
                                probes_winning: probes,
                                landing_block: Some(block),
                                start_cell: start,
                            });
                        }
                    }
                }
                block = (block + 1) % num_blocks;
                from = block * beta;
            }
        }
    }
}

fn block_cells(n: usize, beta: usize, block: usize) -> std::ops::Range<usize> {
    let start = block * beta;
    start..(start + beta).min(n)
}

fn naive_search(
    strategy: StrategyId,
    cells: &[Option<u64>],
    beta: Option<usize>,
    ch: &KeyChoices,
) -> Result<u64> {
    let n = cells.len();
    let key = ch.key_id;
    match strategy {
        StrategyId::Classic => {
            let mut cell = ch.first;
            let mut probes = 1u64;
            loop {
                if cells[cell] == Some(key) {
                    return Ok(probes);
                }
                if cells[cell].is_none() {
                    return Err(Error::KeyNotFound(key));
                }
                cell = (cell + 1) % n;
                probes += 1;
            }
        }
        StrategyId::LocallyLinear => {
            let beta = beta.unwrap();
            // Materialize both within-block walks (overflow included) and
            // alternate through them.
            let seq = |start: usize| -> Vec<usize> {
                let num_blocks = n.div_ceil(beta);
                let mut out = Vec::new();
                let mut block = start / beta;
                let mut from = start;
                for _ in 0..num_blocks {
                    let cs: Vec<usize> = block_cells(n, beta, block).collect();
                    let len = cs.len();
                    let rel0 = from - block * beta;
                    let mut hit_empty = false;
                    for k in 0..len {
                        let cell = cs[(rel0 + k) % len];
                        out.push(cell);
                        if cells[cell].is_none() {
                            hit_empty = true;
                            break;
                        }
                    }
                    if hit_empty {
                        break;
                    }
                    block = (block + 1) % num_blocks;
                    from = block * beta;
                }
                out
            };
            let a = seq(ch.first);
            let b = if ch.first == ch.second {
                Vec::new()
            } else {
                seq(ch.second)
            };
            alternate_until_key(cells, key, &a, &b)
        }
        StrategyId::ShortSeq
        | StrategyId::SmallCluster
        | StrategyId::WalkFirst
        | StrategyId::DecideFirst => {
            let seq = |start: usize| -> Vec<usize> {
                let mut out = Vec::new();
                let mut cell = start;
                loop {
                    out.push(cell);
                    if cells[cell].is_none() {
                        break;
                    }
                    cell = (cell + 1) % n;
                }
                out
            };
            let a = seq(ch.first);
            let b = if ch.first == ch.second {
                Vec::new()
            } else {
                seq(ch.second)
            };
            alternate_until_key(cells, key, &a, &b)
        }
    }
}

fn alternate_until_key(cells: &[Option<u64>], key: u64, a: &[usize], b: &[usize]) -> Result<u64> {
    let mut probes = 0u64;
    let rounds = a.len().max(b.len());
    for r in 0..rounds {
        if let Some(&cell) = a.get(r) {
            probes += 1;
            if cells[cell] == Some(key) {
                return Ok(probes);
            }
        }
        if let Some(&cell) = b.get(r) {
            probes += 1;
            if cells[cell] == Some(key) {
                return Ok(probes);
            }
        }
    }
    Err(Error::KeyNotFound(key))
}

fn naive_census(cells: &[Option<u64>]) -> (usize, f64) {
    let n = cells.len();
    let occupied = cells.iter().filter(|c| c.is_some()).count();
    if occupied == 0 {
        return (0, 0.0);
    }
    if occupied == n {
        return (n, n as f64);
    }
    let anchor = cells.iter().position(|c| c.is_none()).unwrap();
    let mut max = 0usize;
    let mut count = 0usize;
    let mut run = 0usize;
    for k in 1..=n {
        let cell = (anchor + k) % n;
        if cells[cell].is_some() {
            run += 1;
        } else {
            if run > 0 {
                count += 1;
                max = max.max(run);
            }
            run = 0;
        }
    }
    (max, occupied as f64 / count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct FixedStream {
        choices: std::vec::IntoIter<Vec<usize>>,
        bits: std::vec::IntoIter<bool>,
    }

    impl ChoiceStream for FixedStream {
        fn next_choices(&mut self, _d: usize, _s: usize) -> Vec<usize> {
            self.choices.next().unwrap()
        }
        fn tie_bit(&mut self) -> bool {
            self.bits.next().unwrap()
        }
    }

    #[test]
    fn greedy_mc_hand_example() {
        let mut stream = FixedStream {
            choices: vec![vec![0, 1], vec![0, 1], vec![2, 3], vec![2, 3]].into_iter(),
            bits: vec![false, true, false, true].into_iter(),
        };
        let out = greedy_mc(4, 4, 2, &mut stream);
        assert_eq!(out.loads, vec![1, 1, 1, 1]);
        assert_eq!(out.max_load, 1);
    }

    #[test]
    fn greedy_mc_no_balls() {
        let mut stream = FixedStream {
            choices: vec![].into_iter(),
            bits: vec![].into_iter(),
        };
        let out = greedy_mc(4, 0, 2, &mut stream);
        assert_eq!(out.loads, vec![0, 0, 0, 0]);
        assert_eq!(out.max_load, 0);
    }

    #[test]
    fn greedy_mc_single_choice_piles_up() {
        let mut stream = FixedStream {
            choices: vec![vec![0]; 4].into_iter(),
            bits: vec![].into_iter(),
        };
        let out = greedy_mc(4, 4, 1, &mut stream);
        assert_eq!(out.max_load, 4);
    }

    #[test]
    fn naive_replay_single_key() {
        let run = naive_replay(StrategyId::Classic, 16, 0.07, None, 3).unwrap();
        assert_eq!(run.outcomes.len(), 1);
        assert_eq!(run.metrics.insert_avg, 1.0);
        assert_eq!(run.cells.iter().filter(|c| c.is_some()).count(), 1);
    }
}
