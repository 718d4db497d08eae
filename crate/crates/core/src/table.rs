//! Cell-array hash table with cyclic linear-probing primitives and
//! cluster census. Keys are abstract ids; cells never empty out again
//! (FCFS, no deletions).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct TableState {
    cells: Vec<Option<u64>>,
    occupied: usize,
}

/// Maximal cyclic run of occupied cells containing a queried cell.
/// `size == 0` means the queried cell was empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClusterSpan {
    pub start: usize,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterCensus {
    /// Multiset of cluster sizes, in scan order.
    pub sizes: Vec<usize>,
    pub max_size: usize,
    pub mean_size: f64,
    pub cluster_count: usize,
    /// Set when the table is completely full and the whole table is
    /// reported as a single cluster of size n (no empty boundary exists).
    pub degenerate: bool,
}

impl TableState {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "table size must be positive");
        TableState {
            cells: vec![None; n],
            occupied: 0,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.cells.len()
    }

    #[inline]
    pub fn occupied_count(&self) -> usize {
        self.occupied
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.occupied == self.cells.len()
    }

    #[inline]
    pub fn is_occupied(&self, cell: usize) -> bool {
        self.cells[cell].is_some()
    }

    #[inline]
    pub fn key_at(&self, cell: usize) -> Option<u64> {
        self.cells[cell]
    }

    #[inline]
    pub fn cells(&self) -> &[Option<u64>] {
        &self.cells
    }

    /// Stores a key in an empty cell. Occupied cells are never overwritten.
    pub fn place(&mut self, cell: usize, key_id: u64) {
        debug_assert!(self.cells[cell].is_none(), "cell {cell} already occupied");
        self.cells[cell] = Some(key_id);
        self.occupied += 1;
    }

    #[inline]
    pub fn next_cell(&self, cell: usize) -> usize {
        if cell + 1 == self.cells.len() {
            0
        } else {
            cell + 1
        }
    }

    #[inline]
    fn prev_cell(&self, cell: usize) -> usize {
        if cell == 0 {
            self.cells.len() - 1
        } else {
            cell - 1
        }
    }

    pub fn occupied_cells(&self) -> Vec<usize> {
        (0..self.n()).filter(|&c| self.is_occupied(c)).collect()
    }

    /// First empty cell at or cyclically after `start`, together with the
    /// number of cells inspected (the returned empty cell included).
    pub fn probe_forward(&self, start: usize) -> Result<(usize, u64)> {
        if self.is_full() {
            return Err(Error::FullTable);
        }
        let mut cell = start;
        let mut probes = 1u64;
        while self.is_occupied(cell) {
            cell = self.next_cell(cell);
            probes += 1;
        }
        Ok((cell, probes))
    }

    /// The maximal cyclic run of occupied cells containing `cell`.
    pub fn cluster_at(&self, cell: usize) -> Result<ClusterSpan> {
        if self.is_full() {
            return Err(Error::FullTable);
        }
        if !self.is_occupied(cell) {
            return Ok(ClusterSpan { start: cell, size: 0 });
        }
        let mut start = cell;
        while self.is_occupied(self.prev_cell(start)) {
            start = self.prev_cell(start);
        }
        let mut end = cell;
        let mut size = cell_distance(start, cell, self.n()) + 1;
        while self.is_occupied(self.next_cell(end)) {
            end = self.next_cell(end);
            size += 1;
        }
        Ok(ClusterSpan { start, size })
    }

    /// Census of all maximal cyclic runs of occupied cells. A full table
    /// is reported as one degenerate cluster of size n.
    pub fn cluster_census(&self) -> ClusterCensus {
        let n = self.n();
        if self.occupied == 0 {
            return ClusterCensus {
                sizes: Vec::new(),
                max_size: 0,
                mean_size: 0.0,
                cluster_count: 0,
                degenerate: false,
            };
        }
        if self.is_full() {
            return ClusterCensus {
                sizes: vec![n],
                max_size: n,
                mean_size: n as f64,
                cluster_count: 1,
                degenerate: true,
            };
        }
        // Anchor the cyclic scan at an empty cell so no run is split.
        let anchor = (0..n).find(|&c| !self.is_occupied(c)).unwrap();
        let mut sizes = Vec::new();
        let mut run = 0usize;
        let mut cell = self.next_cell(anchor);
        for _ in 0..n - 1 {
            if self.is_occupied(cell) {
                run += 1;
            } else if run > 0 {
                sizes.push(run);
                run = 0;
            }
            cell = self.next_cell(cell);
        }
        if run > 0 {
            sizes.push(run);
        }
        let max_size = sizes.iter().copied().max().unwrap_or(0);
        let cluster_count = sizes.len();
        let total: usize = sizes.iter().sum();
        debug_assert_eq!(total, self.occupied);
        ClusterCensus {
            sizes,
            max_size,
            mean_size: total as f64 / cluster_count as f64,
            cluster_count,
            degenerate: false,
        }
    }
}

/// Cyclic distance from `a` forward to `b` in a table of size `n`.
#[inline]
pub fn cell_distance(a: usize, b: usize, n: usize) -> usize {
    if b >= a {
        b - a
    } else {
        n - a + b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_with(n: usize, occupied: &[usize]) -> TableState {
        let mut t = TableState::new(n);
        for (i, &c) in occupied.iter().enumerate() {
            t.place(c, i as u64);
        }
        t
    }

    #[test]
    fn probe_forward_walks_past_a_run() {
        let t = table_with(8, &[0, 1, 2]);
        assert_eq!(t.probe_forward(0).unwrap(), (3, 4));
    }

    #[test]
    fn probe_forward_on_empty_start() {
        let t = table_with(8, &[]);
        assert_eq!(t.probe_forward(5).unwrap(), (5, 1));
    }

    #[test]
    fn probe_forward_wraps_cyclically() {
        let t = table_with(8, &[6, 7]);
        assert_eq!(t.probe_forward(6).unwrap(), (0, 3));
    }

    #[test]
    fn probe_forward_full_table_errors() {
        let t = table_with(2, &[0, 1]);
        assert_eq!(t.probe_forward(0), Err(Error::FullTable));
    }

    #[test]
    fn cluster_at_wrapping_run() {
        let t = table_with(8, &[7, 0, 1]);
        assert_eq!(t.cluster_at(0).unwrap(), ClusterSpan { start: 7, size: 3 });
    }

    #[test]
    fn cluster_at_empty_cell() {
        let t = table_with(8, &[3]);
        assert_eq!(t.cluster_at(4).unwrap().size, 0);
    }

    #[test]
    fn cluster_at_singleton() {
        let t = table_with(8, &[3]);
        assert_eq!(t.cluster_at(3).unwrap(), ClusterSpan { start: 3, size: 1 });
    }

    #[test]
    fn census_empty_table() {
        let c = table_with(8, &[]).cluster_census();
        assert_eq!(c.cluster_count, 0);
        assert_eq!(c.max_size, 0);
        assert_eq!(c.mean_size, 0.0);
        assert!(c.sizes.is_empty());
    }

    #[test]
    fn census_two_clusters_with_wrap() {
        let c = table_with(8, &[7, 0, 1, 3, 4]).cluster_census();
        let mut sizes = c.sizes.clone();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 3]);
        assert_eq!(c.max_size, 3);
        assert_eq!(c.mean_size, 2.5);
        assert_eq!(c.cluster_count, 2);
        assert!(!c.degenerate);
    }

    #[test]
    fn census_single_cluster() {
        let c = table_with(4, &[0, 1, 2]).cluster_census();
        assert_eq!(c.sizes, vec![3]);
        assert_eq!(c.max_size, 3);
        assert_eq!(c.cluster_count, 1);
    }

    #[test]
    fn census_full_table_is_degenerate() {
        let c = table_with(3, &[0, 1, 2]).cluster_census();
        assert!(c.degenerate);
        assert_eq!(c.sizes, vec![3]);
        assert_eq!(c.max_size, 3);
    }
}
