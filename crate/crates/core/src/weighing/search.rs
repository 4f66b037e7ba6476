//! Depth-first search for a member of `W(n, k, a)`.
//!
//! Normal form explored (every member of `W(n, k, a)` is equivalent to one):
//! row 1 is supported on columns `1..=k` with exponents 0; rows 2..=a have
//! non-decreasing support masks; in each row the first nonzero entry, and
//! every entry that is the first nonzero of its column, has exponent 0.
//! Candidates are tried in lexicographic order, so the first hit is the
//! least matrix of that form and the result is deterministic.

use std::time::{Duration, Instant};

use super::{RootEntry, RootMatrix, WeighingMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximum candidate rows tested; `None` for no limit.
    pub max_nodes: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl SearchBudget {
    pub const fn exhaustive() -> Self {
        SearchBudget {
            max_nodes: None,
            time_limit: None,
        }
    }

    pub const fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes: Some(max_nodes),
            time_limit: None,
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget::nodes(5_000_000)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Found(WeighingMatrix),
    /// The whole tree was explored without a hit.
    Nonexistent,
    /// The budget ran out first.
    Unknown { nodes: u64 },
}

impl SearchOutcome {
    pub fn found(self) -> Option<WeighingMatrix> {
        match self {
            SearchOutcome::Found(w) => Some(w),
            _ => None,
        }
    }
}

struct Row {
    mask: u32,
    exps: Vec<u32>,
}

struct Searcher {
    n: u32,
    k: usize,
    a: usize,
    supports: Vec<u32>,
    cos: Vec<f64>,
    sin: Vec<f64>,
    rows: Vec<Row>,
    col_count: Vec<usize>,
    nodes: u64,
    budget: SearchBudget,
    started: Instant,
    cut: bool,
}

impl Searcher {
    fn out_of_budget(&mut self) -> bool {
        if self.max_nodes_hit() || self.time_hit() {
            self.cut = true;
        }
        self.cut
    }

    fn max_nodes_hit(&self) -> bool {
        self.budget.max_nodes.is_some_and(|m| self.nodes >= m)
    }

    fn time_hit(&self) -> bool {
        self.budget
            .time_limit
            .is_some_and(|t| self.nodes.is_multiple_of(1024) && self.started.elapsed() >= t)
    }

    /// Rows `x` (candidate) and `y` are orthogonal: the sum of
    /// `ζ^{e_x − e_y}` over the common support vanishes.
    fn orthogonal(&self, mask: u32, exps: &[u32], other: &Row) -> bool {
        let common = mask & other.mask;
        if common.count_ones() < 2 {
            return common == 0;
        }
        let mut counts = vec![0u32; self.n as usize];
        for c in 0..self.a {
            if common >> c & 1 == 1 {
                counts[((exps[c] + self.n - other.exps[c]) % self.n) as usize] += 1;
            }
        }
        let (re, im) = counts.iter().enumerate().fold((0.0, 0.0), |(re, im), (t, &m)| {
            (re + f64::from(m) * self.cos[t], im + f64::from(m) * self.sin[t])
        });
        re.hypot(im) < 1e-9
    }

    fn dfs(&mut self, min_support: usize) -> bool {
        let x = self.rows.len();
        if x == self.a {
            return true;
        }
        let remaining_after = self.a - x - 1;
        for si in min_support..self.supports.len() {
            let mask = self.supports[si];
            let cols: Vec<usize> = (0..self.a).filter(|c| mask >> c & 1 == 1).collect();
            if cols.iter().any(|&c| self.col_count[c] >= self.k) {
                continue;
            }
            // each column must still be able to reach weight k
            let feasible = (0..self.a).all(|c| {
                let after = self.col_count[c] + usize::from(mask >> c & 1 == 1);
                after + remaining_after >= self.k
            });
            if !feasible {
                continue;
            }
            // free positions: not the row's first nonzero, not a column's first nonzero
            let free: Vec<usize> = cols
                .iter()
                .copied()
                .skip(1)
                .filter(|&c| self.col_count[c] > 0)
                .collect();
            let mut exps = vec![0u32; self.a];
            loop {
                self.nodes += 1;
                if self.out_of_budget() {
                    return false;
                }
                if self.rows.iter().all(|r| self.orthogonal(mask, &exps, r)) {
                    for &c in &cols {
                        self.col_count[c] += 1;
                    }
                    self.rows.push(Row {
                        mask,
                        exps: exps.clone(),
                    });
                    if self.dfs(si) {
                        return true;
                    }
                    self.rows.pop();
                    for &c in &cols {
                        self.col_count[c] -= 1;
                    }
                    if self.cut {
                        return false;
                    }
                }
                // odometer, last free position fastest
                let mut carry = true;
                for &c in free.iter().rev() {
                    exps[c] += 1;
                    if exps[c] < self.n {
                        carry = false;
                        break;
                    }
                    exps[c] = 0;
                }
                if carry {
                    break;
                }
            }
        }
        false
    }
}

/// Masks of all `k`-subsets of `a` columns, ordered so that the subset
/// listing smaller columns first comes first.
fn k_subsets(a: usize, k: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(0u32, |m, &c| m | 1 << c));
        let mut i = k;
        while i > 0 && idx[i - 1] == a - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Searches `W(n, k, a)` within `budget`.
///
/// A hit is re-validated by [`WeighingMatrix::new`], which shares no code
/// with the orthogonality test used while searching.
pub fn search(n: u32, k: usize, a: usize, budget: SearchBudget) -> Result<SearchOutcome> {
    if n == 0 || k < 2 || k > a || a > 32 {
        return Err(Error::domain(format!(
            "search needs n ≥ 1 and 2 ≤ k ≤ a ≤ 32, got n={n}, k={k}, a={a}"
        )));
    }
    let angle = |t: usize| 2.0 * std::f64::consts::PI * t as f64 / f64::from(n);
    let mut s = Searcher {
        n,
        k,
        a,
        supports: k_subsets(a, k),
        cos: (0..n as usize).map(|t| angle(t).cos()).collect(),
        sin: (0..n as usize).map(|t| angle(t).sin()).collect(),
        rows: Vec::with_capacity(a),
        col_count: vec![0; a],
        nodes: 0,
        budget,
        started: Instant::now(),
        cut: false,
    };
    let first = s.supports[0];
    for c in 0..k {
        s.col_count[c] = 1;
    }
    s.rows.push(Row {
        mask: first,
        exps: vec![0; a],
    });

    if s.dfs(0) {
        let rows = s
            .rows
            .iter()
            .map(|r| {
                (0..a)
                    .map(|c| {
                        if r.mask >> c & 1 == 1 {
                            RootEntry::Root(r.exps[c])
                        } else {
                            RootEntry::Zero
                        }
                    })
                    .collect()
            })
            .collect();
        let found = WeighingMatrix::new(RootMatrix::new(n, rows)?).map_err(|e| {
            Error::Computation(format!("search produced an invalid matrix: {e}"))
        })?;
        Ok(SearchOutcome::Found(found))
    } else if s.cut {
        Ok(SearchOutcome::Unknown { nodes: s.nodes })
    } else {
        Ok(SearchOutcome::Nonexistent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Tolerance;
    use crate::weighing::{exact_gram_is_scalar, validate};

    #[test]
    fn subsets_enumerated_in_order() {
        assert_eq!(k_subsets(4, 3), vec![0b0111, 0b1011, 0b1101, 0b1110]);
        assert_eq!(k_subsets(5, 4).len(), 5);
        assert_eq!(k_subsets(3, 3), vec![0b111]);
    }

    #[test]
    fn finds_real_weight_three_order_four() {
        let w = search(2, 3, 4, SearchBudget::default()).unwrap().found().unwrap();
        let r = validate(w.matrix(), Tolerance::default());
        assert!(r.valid);
        assert_eq!(r.weight, Some(3));
        assert_eq!(exact_gram_is_scalar(w.matrix()), Some(true));
    }

    #[test]
    fn finds_ternary_weight_four_order_five() {
        let w = search(3, 4, 5, SearchBudget::default()).unwrap().found().unwrap();
        assert_eq!(w.weight(), 4);
        assert_eq!(exact_gram_is_scalar(w.matrix()), Some(true));
    }

    #[test]
    fn odd_order_real_weight_three_is_absent() {
        assert_eq!(
            search(2, 3, 5, SearchBudget::exhaustive()).unwrap(),
            SearchOutcome::Nonexistent
        );
        // weight 2 in order 3 is impossible for any root order
        for n in [1, 2, 3, 4, 6] {
            assert_eq!(
                search(n, 2, 3, SearchBudget::exhaustive()).unwrap(),
                SearchOutcome::Nonexistent
            );
        }
    }

    #[test]
    fn budget_cut_reports_unknown() {
        let out = search(3, 4, 5, SearchBudget::nodes(3)).unwrap();
        assert!(matches!(out, SearchOutcome::Unknown { nodes: 3 }));
    }

    #[test]
    fn deterministic() {
        let a = search(2, 3, 4, SearchBudget::default()).unwrap();
        let b = search(2, 3, 4, SearchBudget::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(search(0, 3, 4, SearchBudget::default()).is_err());
        assert!(search(2, 1, 4, SearchBudget::default()).is_err());
        assert!(search(2, 5, 4, SearchBudget::default()).is_err());
    }

    #[test]
    fn fourier_sized_search() {
        // W(n, k, k) contains CH_k for n = k
        let w = search(4, 4, 4, SearchBudget::default()).unwrap().found().unwrap();
        assert_eq!(w.weight(), 4);
    }
}
