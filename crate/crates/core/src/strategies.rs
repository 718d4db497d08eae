//! The six insertion algorithms and their search procedures.
//!
//! Everything is FCFS over [`TableState`], with [`BlockLayout`] counters
//! for the blocked strategies. Probe accounting: every cell inspection
//! costs one probe, including the final empty/target cell. Where two
//! probe sequences alternate, the sequence of the first initial cell goes
//! first at every rank; when the two initial cells coincide the merged
//! sequence is counted once. Every randomized tie-break consumes exactly
//! one bit from the [`TieBreaker`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::blocking::{BlockLayout, CounterKind};
use crate::error::{Error, Result};
use crate::rng::TieBreaker;
use crate::table::TableState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyId {
    Classic,
    ShortSeq,
    SmallCluster,
    LocallyLinear,
    DecideFirst,
    WalkFirst,
}

impl StrategyId {
    pub const ALL: [StrategyId; 6] = [
        StrategyId::Classic,
        StrategyId::ShortSeq,
        StrategyId::SmallCluster,
        StrategyId::LocallyLinear,
        StrategyId::DecideFirst,
        StrategyId::WalkFirst,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            StrategyId::Classic => "classic",
            StrategyId::ShortSeq => "shortseq",
            StrategyId::SmallCluster => "smallcluster",
            StrategyId::LocallyLinear => "locallylinear",
            StrategyId::DecideFirst => "decidefirst",
            StrategyId::WalkFirst => "walkfirst",
        }
    }

    /// Counter kind required by the strategy's block layout, if any.
    pub fn counter_kind(&self) -> Option<CounterKind> {
        match self {
            StrategyId::LocallyLinear | StrategyId::WalkFirst => Some(CounterKind::Load),
            StrategyId::DecideFirst => Some(CounterKind::Weight),
            _ => None,
        }
    }

    pub fn is_blocked(&self) -> bool {
        self.counter_kind().is_some()
    }

    /// Strategies whose probe sequences run along the whole table, so the
    /// unsuccessful-search bound 2 * max cluster + 2 applies.
    pub fn is_two_way_linear(&self) -> bool {
        matches!(
            self,
            StrategyId::ShortSeq
                | StrategyId::SmallCluster
                | StrategyId::WalkFirst
                | StrategyId::DecideFirst
        )
    }
}

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown strategy {s:?}")))
    }
}

/// A key's two initial hashing cells, drawn independently and uniformly
/// with replacement (the two may coincide).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeyChoices {
    pub key_id: u64,
    pub first: usize,
    pub second: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InsertOutcome {
    /// Cell the key was placed in.
    pub cell: usize,
    /// All cell inspections performed by the insertion procedure.
    pub probes_total: u64,
    /// Inspections along the sequence that placed the key.
    pub probes_winning: u64,
    /// For blocked strategies, the block whose counter was bumped.
    pub landing_block: Option<usize>,
    /// The initial cell whose probe sequence contains the final cell.
    pub start_cell: usize,
}

pub fn insert(
    strategy: StrategyId,
    table: &mut TableState,
    layout: Option<&mut BlockLayout>,
    choices: KeyChoices,
    ties: &mut dyn TieBreaker,
) -> Result<InsertOutcome> {
    match strategy {
        StrategyId::Classic => insert_classic(table, choices),
        StrategyId::ShortSeq => insert_shortseq(table, choices),
        StrategyId::SmallCluster => insert_smallcluster(table, choices, ties),
        StrategyId::LocallyLinear => {
            insert_locallylinear(table, require_layout(strategy, layout)?, choices, ties)
        }
        StrategyId::DecideFirst => {
            insert_decidefirst(table, require_layout(strategy, layout)?, choices, ties)
        }
        StrategyId::WalkFirst => {
            insert_walkfirst(table, require_layout(strategy, layout)?, choices, ties)
        }
    }
}

fn require_layout<'a>(
    strategy: StrategyId,
    layout: Option<&'a mut BlockLayout>,
) -> Result<&'a mut BlockLayout> {
    let layout = layout
        .ok_or_else(|| Error::InvalidParams(format!("{strategy} requires a block layout")))?;
    if Some(layout.kind()) != strategy.counter_kind() {
        return Err(Error::InvalidParams(format!(
            "{strategy} requires {:?} counters, layout has {:?}",
            strategy.counter_kind(),
            layout.kind()
        )));
    }
    Ok(layout)
}

/// Classical linear probing: single forward walk from the first initial
/// cell; the second choice is ignored.
pub fn insert_classic(table: &mut TableState, choices: KeyChoices) -> Result<InsertOutcome> {
    let (cell, probes) = table.probe_forward(choices.first)?;
    table.place(cell, choices.key_id);
    Ok(InsertOutcome {
        cell,
        probes_total: probes,
        probes_winning: probes,
        landing_block: None,
        start_cell: choices.first,
    })
}

/// Insert at the first empty cell of the interleaved probe sequence
/// f1, g1, f2, g2, ... (first choice inspected first at every rank).
pub fn insert_shortseq(table: &mut TableState, choices: KeyChoices) -> Result<InsertOutcome> {
    if table.is_full() {
        return Err(Error::FullTable);
    }
    if choices.first == choices.second {
        return insert_classic(table, choices);
    }
    let n = table.n();
    let mut probes = 0u64;
    for rank in 0..n as u64 {
        for start in [choices.first, choices.second] {
            let cell = (start + rank as usize) % n;
            probes += 1;
            if !table.is_occupied(cell) {
                table.place(cell, choices.key_id);
                return Ok(InsertOutcome {
                    cell,
                    probes_total: probes,
                    probes_winning: rank + 1,
                    landing_block: None,
                    start_cell: start,
                });
            }
        }
    }
    unreachable!("a non-full table has an empty cell within n ranks")
}

/// Insert next to the smaller of the two clusters containing the initial
/// cells. An empty initial cell takes the key directly (the first one if
/// both are empty); a tie between equal cluster sizes costs one random bit.
///
/// `probes_total` counts the bidirectional cluster scans (each initial
/// cell's own inspection counted once); `probes_winning` is the forward
/// walk from the winning initial cell to the final cell.
pub fn insert_smallcluster(
    table: &mut TableState,
    choices: KeyChoices,
    ties: &mut dyn TieBreaker,
) -> Result<InsertOutcome> {
    if table.is_full() {
        return Err(Error::FullTable);
    }
    let (i, j) = (choices.first, choices.second);
    if i == j {
        if !table.is_occupied(i) {
            table.place(i, choices.key_id);
            return Ok(InsertOutcome {
                cell: i,
                probes_total: 1,
                probes_winning: 1,
                landing_block: None,
                start_cell: i,
            });
        }
        let scan = table.cluster_at(i)?.size as u64 + 2;
        return place_forward(table, choices.key_id, i, scan);
    }
    match (table.is_occupied(i), table.is_occupied(j)) {
        // Both initial cells empty: the key goes to the first one. The
        // empty-cell check is sequential, so no coin is tossed; a random
        // pick here would double the search cost of these keys (the
        // search probes the first sequence first) and measurably inflate
        // the average successful search time at low load factors.
        (false, false) => {
            table.place(i, choices.key_id);
            Ok(InsertOutcome {
                cell: i,
                probes_total: 2,
                probes_winning: 1,
                landing_block: None,
                start_cell: i,
            })
        }
        (false, true) => {
            table.place(i, choices.key_id);
            Ok(InsertOutcome {
                cell: i,
                probes_total: 2,
                probes_winning: 1,
                landing_block: None,
                start_cell: i,
            })
        }
        (true, false) => {
            table.place(j, choices.key_id);
            Ok(InsertOutcome {
                cell: j,
                probes_total: 2,
                probes_winning: 1,
                landing_block: None,
                start_cell: j,
            })
        }
        (true, true) => {
            let si = table.cluster_at(i)?.size as u64;
            let sj = table.cluster_at(j)?.size as u64;
            let total = si + 2 + sj + 2;
            let winner = if si < sj {
                i
            } else if sj < si {
                j
            } else if ties.tie_bit() {
                j
            } else {
                i
            };
            place_forward(table, choices.key_id, winner, total)
        }
    }
}

fn place_forward(
    table: &mut TableState,
    key_id: u64,
    start: usize,
    probes_total: u64,
) -> Result<InsertOutcome> {
    let (cell, walk) = table.probe_forward(start)?;
    table.place(cell, key_id);
    Ok(InsertOutcome {
        cell,
        probes_total,
        probes_winning: walk,
        landing_block: None,
        start_cell: start,
    })
}

/// Walk both forward sequences to their terminal cells, then insert into
/// the terminal cell whose block carries the smaller load.
pub fn insert_walkfirst(
    table: &mut TableState,
    layout: &mut BlockLayout,
    choices: KeyChoices,
    ties: &mut dyn TieBreaker,
) -> Result<InsertOutcome> {
    let (i, j) = (choices.first, choices.second);
    let (u, pu) = table.probe_forward(i)?;
    if i == j {
        table.place(u, choices.key_id);
        let block = layout.block_of(u);
        layout.bump(block);
        return Ok(InsertOutcome {
            cell: u,
            probes_total: pu,
            probes_winning: pu,
            landing_block: Some(block),
            start_cell: i,
        });
    }
    let (v, pv) = table.probe_forward(j)?;
    let probes_total = pu + pv;
    let (cell, probes_winning, start_cell) = if u == v {
        (u, pu, i)
    } else {
        let (bu, bv) = (layout.block_of(u), layout.block_of(v));
        let (lu, lv) = (layout.counter(bu), layout.counter(bv));
        let first_wins = if lu < lv {
            true
        } else if lv < lu {
            false
        } else {
            !ties.tie_bit()
        };
        if first_wins {
            (u, pu, i)
        } else {
            (v, pv, j)
        }
    };
    table.place(cell, choices.key_id);
    let block = layout.block_of(cell);
    layout.bump(block);
    Ok(InsertOutcome {
        cell,
        probes_total,
        probes_winning,
        landing_block: Some(block),
        start_cell,
    })
}

/// Land in the block of smaller weight first, then walk a single forward
/// sequence from the initial cell in that block (crossing block
/// boundaries). The landing block's weight is bumped even when the final
/// cell lies in another block. When both initial cells share a block the
/// walk starts from the first choice.
pub fn insert_decidefirst(
    table: &mut TableState,
    layout: &mut BlockLayout,
    choices: KeyChoices,
    ties: &mut dyn TieBreaker,
) -> Result<InsertOutcome> {
    if table.is_full() {
        return Err(Error::FullTable);
    }
    let (i, j) = (choices.first, choices.second);
    let (bi, bj) = (layout.block_of(i), layout.block_of(j));
    let (start, landing) = if bi == bj {
        (i, bi)
    } else {
        let (wi, wj) = (layout.counter(bi), layout.counter(bj));
        if wi < wj {
            (i, bi)
        } else if wj < wi {
            (j, bj)
        } else if ties.tie_bit() {
            (j, bj)
        } else {
            (i, bi)
        }
    };
    let (cell, probes) = table.probe_forward(start)?;
    table.place(cell, choices.key_id);
    layout.bump(landing);
    Ok(InsertOutcome {
        cell,
        probes_total: probes,
        probes_winning: probes,
        landing_block: Some(landing),
        start_cell: start,
    })
}

/// Probe cyclically *within* the less loaded of the two chosen blocks,
/// starting from its initial cell; a full block (known from its counter,
/// at no probe cost) overflows to its right neighbor, scanned from the
/// neighbor's first cell.
pub fn insert_locallylinear(
    table: &mut TableState,
    layout: &mut BlockLayout,
    choices: KeyChoices,
    ties: &mut dyn TieBreaker,
) -> Result<InsertOutcome> {
    if table.is_full() {
        return Err(Error::FullTable);
    }
    let (i, j) = (choices.first, choices.second);
    let (bi, bj) = (layout.block_of(i), layout.block_of(j));
    // Relative fullness via cross-multiplication: with a short final block
    // a raw-count comparison would make it look permanently underloaded,
    // turning it into a sink that overflows into its neighbors. Reduces to
    // a plain load comparison when all blocks have the same length.
    let ri = layout.counter(bi) * layout.block_len(bj) as u64;
    let rj = layout.counter(bj) * layout.block_len(bi) as u64;
    let start_cell = if ri < rj {
        i
    } else if rj < ri {
        j
    } else if ties.tie_bit() {
        j
    } else {
        i
    };
    let mut block = layout.block_of(start_cell);
    let mut from = start_cell;
    let mut probes = 0u64;
    loop {
        let len = layout.block_len(block);
        if (layout.counter(block) as usize) < len {
            let base = layout.block_start(block);
            let rel0 = from - base;
            for k in 0..len {
                let cell = base + (rel0 + k) % len;
                probes += 1;
                if !table.is_occupied(cell) {
                    table.place(cell, choices.key_id);
                    layout.bump(block);
                    return Ok(InsertOutcome {
                        cell,
                        probes_total: probes,
                        probes_winning: probes,
                        landing_block: Some(block),
                        start_cell,
                    });
                }
            }
            debug_assert!(false, "load counter below block length but no empty cell");
        }
        block = (block + 1) % layout.num_blocks();
        from = layout.block_start(block);
    }
}

/// One probe sequence, yielding inspected cells one at a time.
enum ProbeSeq<'a> {
    /// Forward walk along the table; ends after yielding an empty cell.
    Linear {
        table: &'a TableState,
        cell: usize,
        done: bool,
    },
    /// Within-block walk with the overflow rule: a fully scanned block
    /// without an empty cell continues at its right neighbor's first cell.
    /// Ends after yielding an empty cell or once every block is exhausted.
    Local {
        table: &'a TableState,
        layout: &'a BlockLayout,
        block: usize,
        rel0: usize,
        step: usize,
        blocks_left: usize,
        done: bool,
    },
}

impl<'a> ProbeSeq<'a> {
    fn linear(table: &'a TableState, start: usize) -> Self {
        ProbeSeq::Linear {
            table,
            cell: start,
            done: false,
        }
    }

    fn local(table: &'a TableState, layout: &'a BlockLayout, start: usize) -> Self {
        let block = layout.block_of(start);
        ProbeSeq::Local {
            table,
            layout,
            block,
            rel0: start - layout.block_start(block),
            step: 0,
            blocks_left: layout.num_blocks(),
            done: false,
        }
    }

    fn next_probe(&mut self) -> Option<usize> {
        match self {
            ProbeSeq::Linear { table, cell, done } => {
                if *done {
                    return None;
                }
                let c = *cell;
                if table.is_occupied(c) {
                    *cell = table.next_cell(c);
                } else {
                    *done = true;
                }
                Some(c)
            }
            ProbeSeq::Local {
                table,
                layout,
                block,
                rel0,
                step,
                blocks_left,
                done,
            } => {
                if *done {
                    return None;
                }
                loop {
                    let len = layout.block_len(*block);
                    if *step < len {
                        let c = layout.block_start(*block) + (*rel0 + *step) % len;
                        *step += 1;
                        if !table.is_occupied(c) {
                            *done = true;
                        }
                        return Some(c);
                    }
                    // Block scanned in full without an empty cell.
                    *blocks_left -= 1;
                    if *blocks_left == 0 {
                        *done = true;
                        return None;
                    }
                    *block = (*block + 1) % layout.num_blocks();
                    *rel0 = 0;
                    *step = 0;
                }
            }
        }
    }
}

fn probe_sequences<'a>(
    strategy: StrategyId,
    table: &'a TableState,
    layout: Option<&'a BlockLayout>,
    choices: &KeyChoices,
) -> Result<(ProbeSeq<'a>, Option<ProbeSeq<'a>>)> {
    let make = |start: usize| -> Result<ProbeSeq<'a>> {
        Ok(match strategy {
            StrategyId::LocallyLinear => {
                let layout = layout.ok_or_else(|| {
                    Error::InvalidParams("locallylinear search requires a block layout".into())
                })?;
                ProbeSeq::local(table, layout, start)
            }
            _ => ProbeSeq::linear(table, start),
        })
    };
    let first = make(choices.first)?;
    let second = if strategy == StrategyId::Classic || choices.first == choices.second {
        None
    } else {
        Some(make(choices.second)?)
    };
    Ok((first, second))
}

/// Replay search for a recorded key: probe both sequences alternately
/// (first choice first) until a cell holding the key is inspected. Every
/// inspection counts, duplicates included.
pub fn search_successful(
    strategy: StrategyId,
    table: &TableState,
    layout: Option<&BlockLayout>,
    choices: &KeyChoices,
) -> Result<u64> {
    let (mut first, mut second) = probe_sequences(strategy, table, layout, choices)?;
    let key = choices.key_id;
    let mut probes = 0u64;
    loop {
        let mut progressed = false;
        if let Some(cell) = first.next_probe() {
            probes += 1;
            progressed = true;
            if table.key_at(cell) == Some(key) {
                return Ok(probes);
            }
        }
        if let Some(seq) = second.as_mut() {
            if let Some(cell) = seq.next_probe() {
                probes += 1;
                progressed = true;
                if table.key_at(cell) == Some(key) {
                    return Ok(probes);
                }
            }
        }
        if !progressed {
            return Err(Error::KeyNotFound(key));
        }
    }
}

/// Probe both sequences alternately until each has reached an empty cell
/// (or, within blocks, exhausted every full block). Returns the total
/// number of inspections.
pub fn search_unsuccessful(
    strategy: StrategyId,
    table: &TableState,
    layout: Option<&BlockLayout>,
    choices: &KeyChoices,
) -> Result<u64> {
    if table.is_full() {
        return Err(Error::FullTable);
    }
    let (mut first, mut second) = probe_sequences(strategy, table, layout, choices)?;
    let mut probes = 0u64;
    loop {
        let mut progressed = false;
        if first.next_probe().is_some() {
            probes += 1;
            progressed = true;
        }
        if let Some(seq) = second.as_mut() {
            if seq.next_probe().is_some() {
                probes += 1;
                progressed = true;
            }
        }
        if !progressed {
            return Ok(probes);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::FixedTies;

    fn table_with(n: usize, occupied: &[usize]) -> TableState {
        let mut t = TableState::new(n);
        for (i, &c) in occupied.iter().enumerate() {
            t.place(c, 1000 + i as u64);
        }
        t
    }

    fn choices(key_id: u64, first: usize, second: usize) -> KeyChoices {
        KeyChoices {
            key_id,
            first,
            second,
        }
    }

    #[test]
    fn classic_empty_target() {
        let mut t = table_with(8, &[]);
        let out = insert_classic(&mut t, choices(1, 5, 0)).unwrap();
        assert_eq!((out.cell, out.probes_total), (5, 1));
    }

    #[test]
    fn classic_steps_past_occupied() {
        let mut t = table_with(8, &[5]);
        let out = insert_classic(&mut t, choices(1, 5, 0)).unwrap();
        assert_eq!((out.cell, out.probes_total), (6, 2));
    }

    #[test]
    fn classic_wraps() {
        let mut t = table_with(8, &[6, 7]);
        let out = insert_classic(&mut t, choices(1, 6, 0)).unwrap();
        assert_eq!((out.cell, out.probes_total), (0, 3));
    }

    #[test]
    fn shortseq_second_rank_one_wins() {
        let mut t = table_with(8, &[3]);
        let out = insert_shortseq(&mut t, choices(1, 3, 5)).unwrap();
        assert_eq!((out.cell, out.probes_total), (5, 2));
        assert_eq!(out.start_cell, 5);
        assert_eq!(out.probes_winning, 1);
    }

    #[test]
    fn shortseq_first_inspection_wins() {
        let mut t = table_with(8, &[]);
        let out = insert_shortseq(&mut t, choices(1, 2, 6)).unwrap();
        assert_eq!((out.cell, out.probes_total), (2, 1));
    }

    #[test]
    fn shortseq_interleaves() {
        let mut t = table_with(8, &[2, 3, 6]);
        let out = insert_shortseq(&mut t, choices(1, 2, 6)).unwrap();
        // inspects 2, 6, 3, 7
        assert_eq!((out.cell, out.probes_total), (7, 4));
        assert_eq!(out.start_cell, 6);
        assert_eq!(out.probes_winning, 2);
    }

    #[test]
    fn smallcluster_picks_smaller_cluster() {
        let mut t = table_with(8, &[1, 2, 3, 6]);
        let mut ties = FixedTies::new(vec![]);
        let out = insert_smallcluster(&mut t, choices(1, 2, 6), &mut ties).unwrap();
        // clusters: {1,2,3} size 3 vs {6} size 1 -> walk from 6 -> cell 7
        assert_eq!(out.cell, 7);
        assert_eq!(out.probes_total, (3 + 2) + (1 + 2));
        assert_eq!(out.probes_winning, 2);
        assert_eq!(out.start_cell, 6);
        assert_eq!(ties.consumed(), 0);
    }

    #[test]
    fn smallcluster_empty_initial_cell_wins() {
        let mut t = table_with(8, &[4]);
        let mut ties = FixedTies::new(vec![]);
        let out = insert_smallcluster(&mut t, choices(1, 2, 4), &mut ties).unwrap();
        assert_eq!(out.cell, 2);
        assert_eq!(out.probes_total, 2);
    }

    #[test]
    fn smallcluster_both_empty_first_cell_wins_without_coin() {
        let mut t = table_with(8, &[]);
        let mut ties = FixedTies::new(vec![]);
        let out = insert_smallcluster(&mut t, choices(1, 6, 2), &mut ties).unwrap();
        assert_eq!(out.cell, 6);
        assert_eq!(out.probes_total, 2);
        assert_eq!(ties.consumed(), 0);
    }

    #[test]
    fn smallcluster_tie_bit_convention() {
        // Equal cluster sizes: bit 0 -> first choice's side, bit 1 -> second's.
        let base = table_with(8, &[1, 5]);
        let mut t = base.clone();
        let out =
            insert_smallcluster(&mut t, choices(9, 1, 5), &mut FixedTies::new(vec![false]))
                .unwrap();
        assert_eq!(out.cell, 2);
        let mut t = base.clone();
        let out =
            insert_smallcluster(&mut t, choices(9, 1, 5), &mut FixedTies::new(vec![true]))
                .unwrap();
        assert_eq!(out.cell, 6);
    }

    #[test]
    fn walkfirst_least_loaded_block() {
        let mut t = table_with(8, &[0, 1, 4]);
        let mut layout = BlockLayout::new(8, 4, CounterKind::Load);
        layout.bump(0);
        layout.bump(0);
        layout.bump(1);
        let mut ties = FixedTies::new(vec![]);
        let out = insert_walkfirst(&mut t, &mut layout, choices(1, 0, 4), &mut ties).unwrap();
        // U = 2 (3 probes), V = 5 (2 probes); loads (2,1) -> block 1 wins
        assert_eq!(out.cell, 5);
        assert_eq!(out.probes_total, 5);
        assert_eq!(out.probes_winning, 2);
        assert_eq!(out.start_cell, 4);
        assert_eq!(out.landing_block, Some(1));
        assert_eq!(layout.counters(), &[2, 2]);
    }

    #[test]
    fn walkfirst_identical_choices_single_walk() {
        let mut t = table_with(8, &[4]);
        let mut layout = BlockLayout::new(8, 4, CounterKind::Load);
        layout.bump(1);
        let mut ties = FixedTies::new(vec![]);
        let out = insert_walkfirst(&mut t, &mut layout, choices(1, 4, 4), &mut ties).unwrap();
        assert_eq!((out.cell, out.probes_total), (5, 2));
    }

    #[test]
    fn walkfirst_tie_bit_convention() {
        let base = table_with(8, &[]);
        let mut layout = BlockLayout::new(8, 4, CounterKind::Load);
        let mut t = base.clone();
        let out = insert_walkfirst(
            &mut t,
            &mut layout,
            choices(1, 1, 6),
            &mut FixedTies::new(vec![false]),
        )
        .unwrap();
        assert_eq!(out.cell, 1);
        let mut layout = BlockLayout::new(8, 4, CounterKind::Load);
        let mut t = base;
        let out = insert_walkfirst(
            &mut t,
            &mut layout,
            choices(1, 1, 6),
            &mut FixedTies::new(vec![true]),
        )
        .unwrap();
        assert_eq!(out.cell, 6);
    }

    #[test]
    fn decidefirst_lands_in_lighter_block() {
        let mut t = table_with(8, &[6]);
        let mut layout = BlockLayout::new(8, 4, CounterKind::Weight);
        for _ in 0..3 {
            layout.bump(0);
        }
        layout.bump(1);
        let mut ties = FixedTies::new(vec![]);
        let out = insert_decidefirst(&mut t, &mut layout, choices(1, 1, 6), &mut ties).unwrap();
        assert_eq!(out.cell, 7);
        assert_eq!(out.probes_total, 2);
        assert_eq!(out.landing_block, Some(1));
        assert_eq!(layout.counters(), &[3, 2]);
    }

    #[test]
    fn decidefirst_same_block_starts_from_first() {
        let mut t = table_with(8, &[1]);
        let mut layout = BlockLayout::new(8, 4, CounterKind::Weight);
        let mut ties = FixedTies::new(vec![]);
        let out = insert_decidefirst(&mut t, &mut layout, choices(1, 1, 3), &mut ties).unwrap();
        assert_eq!(out.start_cell, 1);
        assert_eq!(out.cell, 2);
        assert_eq!(ties.consumed(), 0);
    }

    #[test]
    fn decidefirst_tie_bit_convention() {
        let mut t = table_with(8, &[]);
        let mut layout = BlockLayout::new(8, 4, CounterKind::Weight);
        let out = insert_decidefirst(
            &mut t,
            &mut layout,
            choices(1, 2, 6),
            &mut FixedTies::new(vec![false]),
        )
        .unwrap();
        assert_eq!((out.cell, out.probes_total), (2, 1));
    }

    #[test]
    fn locallylinear_walks_within_block() {
        let mut t = table_with(8, &[0, 4, 5, 6]);
        let mut layout = BlockLayout::new(8, 4, CounterKind::Load);
        layout.bump(0);
        for _ in 0..3 {
            layout.bump(1);
        }
        let mut ties = FixedTies::new(vec![]);
        let out = insert_locallylinear(&mut t, &mut layout, choices(1, 0, 5), &mut ties).unwrap();
        assert_eq!((out.cell, out.probes_total), (1, 2));
        assert_eq!(out.landing_block, Some(0));
    }

    #[test]
    fn locallylinear_overflows_to_right_neighbor() {
        let mut t = table_with(8, &[0, 1, 2, 3]);
        let mut layout = BlockLayout::new(8, 4, CounterKind::Load);
        for _ in 0..4 {
            layout.bump(0);
        }
        let mut ties = FixedTies::new(vec![true]);
        let out = insert_locallylinear(&mut t, &mut layout, choices(1, 1, 3), &mut ties).unwrap();
        assert_eq!((out.cell, out.probes_total), (4, 1));
        assert_eq!(out.landing_block, Some(1));
        // start cells tie on load, so one bit was spent
        assert_eq!(ties.consumed(), 1);
    }

    #[test]
    fn locallylinear_tie_bit_convention() {
        let mut t = table_with(8, &[]);
        let mut layout = BlockLayout::new(8, 4, CounterKind::Load);
        let out = insert_locallylinear(
            &mut t,
            &mut layout,
            choices(1, 2, 6),
            &mut FixedTies::new(vec![false]),
        )
        .unwrap();
        assert_eq!((out.cell, out.probes_total), (2, 1));
    }

    #[test]
    fn search_shortseq_replays_insertion() {
        let mut t = table_with(8, &[3]);
        insert_shortseq(&mut t, choices(1, 3, 5)).unwrap();
        let probes =
            search_successful(StrategyId::ShortSeq, &t, None, &choices(1, 3, 5)).unwrap();
        assert_eq!(probes, 2);
    }

    #[test]
    fn search_classic_at_initial_cell() {
        let mut t = table_with(8, &[]);
        insert_classic(&mut t, choices(1, 4, 0)).unwrap();
        let probes = search_successful(StrategyId::Classic, &t, None, &choices(1, 4, 0)).unwrap();
        assert_eq!(probes, 1);
    }

    #[test]
    fn search_walkfirst_alternates() {
        // Occupied {0,1,2,4,5}, key at cell 5 with I=0, J=4: probes 0,4,1,5.
        let mut t = table_with(8, &[0, 1, 2, 4]);
        t.place(5, 7);
        let probes =
            search_successful(StrategyId::WalkFirst, &t, None, &choices(7, 0, 4)).unwrap();
        assert_eq!(probes, 4);
    }

    #[test]
    fn search_missing_key_is_a_bug() {
        let t = table_with(8, &[0]);
        assert_eq!(
            search_successful(StrategyId::Classic, &t, None, &choices(42, 0, 0)),
            Err(Error::KeyNotFound(42))
        );
    }

    #[test]
    fn unsuccessful_both_empty() {
        let t = table_with(8, &[]);
        let probes =
            search_unsuccessful(StrategyId::ShortSeq, &t, None, &choices(0, 2, 6)).unwrap();
        assert_eq!(probes, 2);
    }

    #[test]
    fn unsuccessful_merged_identical_sequences() {
        let t = table_with(8, &[]);
        let probes =
            search_unsuccessful(StrategyId::ShortSeq, &t, None, &choices(0, 2, 2)).unwrap();
        assert_eq!(probes, 1);
    }

    #[test]
    fn unsuccessful_bounded_by_clusters() {
        // max cluster 3 -> at most 2*3 + 2 probes for two-way strategies
        let t = table_with(8, &[1, 2, 3, 6]);
        for i in 0..8 {
            for j in 0..8 {
                let probes =
                    search_unsuccessful(StrategyId::WalkFirst, &t, None, &choices(0, i, j))
                        .unwrap();
                assert!(probes <= 8, "probes {probes} for ({i},{j})");
            }
        }
    }

    #[test]
    fn strategy_names_round_trip() {
        for id in StrategyId::ALL {
            assert_eq!(id.name().parse::<StrategyId>().unwrap(), id);
        }
        assert!("bogus".parse::<StrategyId>().is_err());
    }
}
