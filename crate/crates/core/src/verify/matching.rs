//! Row–column matchings of coordinate sets.
//!
//! A set `T` of grid cells is a bipartite graph between rows and columns.
//! The largest Schmidt rank in `span{E_c : c ∈ T}` equals the size of a
//! maximum matching of that graph.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::order::Coord;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub size: usize,
    /// Matched cells, sorted by row.
    pub pairs: Vec<Coord>,
}

/// Rows and columns covering every cell of a set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineCover {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl LineCover {
    pub fn len(&self) -> usize {
        self.rows.len() + self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty() && self.cols.is_empty()
    }

    pub fn covers(&self, c: Coord) -> bool {
        self.rows.contains(&c.row) || self.cols.contains(&c.col)
    }
}

struct Graph {
    rows: Vec<usize>,
    adj: Vec<Vec<usize>>,
    cols: Vec<usize>,
}

impl Graph {
    fn new(cells: &[Coord]) -> Self {
        let mut by_row: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut cols: Vec<usize> = cells.iter().map(|c| c.col).collect();
        cols.sort_unstable();
        cols.dedup();
        for c in cells {
            let j = cols.binary_search(&c.col).expect("column indexed");
            let e = by_row.entry(c.row).or_default();
            if !e.contains(&j) {
                e.push(j);
            }
        }
        for v in by_row.values_mut() {
            v.sort_unstable();
        }
        let (rows, adj) = by_row.into_iter().unzip();
        Graph { rows, adj, cols }
    }

    /// `col_match[j]` is the row index matched to column `j`.
    fn maximum(&self) -> Vec<Option<usize>> {
        let mut col_match = vec![None; self.cols.len()];
        for r in 0..self.rows.len() {
            let mut seen = vec![false; self.cols.len()];
            self.augment(r, &mut seen, &mut col_match);
        }
        col_match
    }

    fn augment(&self, r: usize, seen: &mut [bool], col_match: &mut [Option<usize>]) -> bool {
        for &j in &self.adj[r] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if col_match[j].is_none_or(|r2| self.augment(r2, seen, col_match)) {
                col_match[j] = Some(r);
                return true;
            }
        }
        false
    }
}

/// A maximum row–column matching of `cells`, by augmenting paths.
pub fn max_matching(cells: &[Coord]) -> Matching {
    let g = Graph::new(cells);
    let col_match = g.maximum();
    let mut pairs: Vec<Coord> = col_match
        .iter()
        .enumerate()
        .filter_map(|(j, r)| r.map(|r| Coord::new(g.rows[r], g.cols[j])))
        .collect();
    pairs.sort();
    Matching {
        size: pairs.len(),
        pairs,
    }
}

/// A minimum line cover of `cells`, read off a maximum matching (König).
pub fn min_line_cover(cells: &[Coord]) -> LineCover {
    let g = Graph::new(cells);
    let col_match = g.maximum();
    let mut row_matched = vec![false; g.rows.len()];
    for r in col_match.iter().flatten() {
        row_matched[*r] = true;
    }
    // alternating search from unmatched rows
    let mut row_seen = vec![false; g.rows.len()];
    let mut col_seen = vec![false; g.cols.len()];
    let mut stack: Vec<usize> = (0..g.rows.len()).filter(|&r| !row_matched[r]).collect();
    for &r in &stack {
        row_seen[r] = true;
    }
    while let Some(r) = stack.pop() {
        for &j in &g.adj[r] {
            if col_seen[j] {
                continue;
            }
            col_seen[j] = true;
            if let Some(r2) = col_match[j] {
                if !row_seen[r2] {
                    row_seen[r2] = true;
                    stack.push(r2);
                }
            }
        }
    }
    LineCover {
        rows: (0..g.rows.len()).filter(|&r| !row_seen[r]).map(|r| g.rows[r]).collect(),
        cols: (0..g.cols.len()).filter(|&j| col_seen[j]).map(|j| g.cols[j]).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(cells: &[Coord]) -> usize {
        let n = cells.len();
        (0u32..1 << n)
            .filter(|mask| {
                let chosen: Vec<Coord> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| cells[i]).collect();
                chosen.iter().enumerate().all(|(i, a)| {
                    chosen[i + 1..].iter().all(|b| a.row != b.row && a.col != b.col)
                })
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn same_row() {
        let t = [Coord::new(7, 1), Coord::new(7, 2)];
        assert_eq!(max_matching(&t).size, 1);
        assert_eq!(min_line_cover(&t), LineCover { rows: vec![7], cols: vec![] });
    }

    #[test]
    fn row_column_and_corner() {
        let mut t: Vec<Coord> = (1..=9).map(|j| Coord::new(8, j)).collect();
        t.extend((1..=7).map(|i| Coord::new(i, 9)));
        t.extend([Coord::new(6, 8), Coord::new(7, 8)]);
        let m = max_matching(&t);
        assert_eq!(m.size, 3);
        let cover = min_line_cover(&t);
        assert_eq!(cover.len(), 3);
        assert!(t.iter().all(|&c| cover.covers(c)));
        // 18 cells is beyond the subset oracle; the rows 6..8 slice is not
        let small: Vec<Coord> = t.iter().copied().filter(|c| c.row >= 6).collect();
        assert_eq!(max_matching(&small).size, brute_force(&small));
    }

    #[test]
    fn diagonal() {
        for k in 1..=6 {
            let t: Vec<Coord> = (1..=k).map(|i| Coord::new(i, i)).collect();
            let m = max_matching(&t);
            assert_eq!(m.size, k);
            assert_eq!(m.pairs, t);
        }
        assert_eq!(max_matching(&[]).size, 0);
        assert!(min_line_cover(&[]).is_empty());
    }

    #[test]
    fn pairs_are_a_matching() {
        let t = [
            Coord::new(1, 1),
            Coord::new(1, 2),
            Coord::new(2, 1),
            Coord::new(3, 1),
            Coord::new(3, 3),
        ];
        let m = max_matching(&t);
        assert_eq!(m.size, 3);
        assert_eq!(m.size, brute_force(&t));
        assert!(m.pairs.iter().all(|p| t.contains(p)));
        assert_eq!(min_line_cover(&t).len(), 3);
    }
}
