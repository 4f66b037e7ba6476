//! Coordinates of a `d × d'` grid and the diagonal-sweep total order on them.
//!
//! For `d ≤ d'` the cell `(i, j)` (1-based) receives index `(j − i)·d + i` when
//! `i ≤ j` and `(d' + j − i)·d + i` otherwise, i.e. the grid is read along its
//! wrapped diagonals, `d` cells per diagonal. A tall grid (`d > d'`) uses the
//! order of its transpose. Two distinct cells sharing a row or a column are
//! always at least `min(d, d') − 1` apart, so any `min(d, d') − 1` consecutive
//! cells lie in distinct rows and distinct columns. The block constructions
//! rely on that window property.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 1-based `(row, col)` cell position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Coord {
    pub row: usize,
    pub col: usize,
}

impl Coord {
    pub const fn new(row: usize, col: usize) -> Self {
        Coord { row, col }
    }

    pub const fn transposed(self) -> Self {
        Coord {
            row: self.col,
            col: self.row,
        }
    }
}

impl From<(usize, usize)> for Coord {
    fn from((row, col): (usize, usize)) -> Self {
        Coord { row, col }
    }
}

impl From<Coord> for (usize, usize) {
    fn from(c: Coord) -> Self {
        (c.row, c.col)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// A `rows × cols` coordinate grid equipped with the diagonal-sweep order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedGrid {
    rows: usize,
    cols: usize,
    /// Set when `rows > cols`; the order is then read off the transpose.
    transposed: bool,
}

impl OrderedGrid {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(Error::domain(format!(
                "grid dimensions must be at least 2, got {rows}×{cols}"
            )));
        }
        Ok(OrderedGrid {
            rows,
            cols,
            transposed: rows > cols,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_transposed(&self) -> bool {
        self.transposed
    }

    /// Lower bound on the index distance of two cells sharing a line.
    pub fn line_gap(&self) -> usize {
        self.rows.min(self.cols) - 1
    }

    pub fn contains(&self, c: Coord) -> bool {
        (1..=self.rows).contains(&c.row) && (1..=self.cols).contains(&c.col)
    }

    fn check(&self, c: Coord) -> Result<()> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "coordinate {c} outside the {}×{} grid",
                self.rows, self.cols
            )))
        }
    }

    /// Short side, long side, and `c` expressed in the wide orientation.
    fn wide(&self, c: Coord) -> (usize, usize, Coord) {
        if self.transposed {
            (self.cols, self.rows, c.transposed())
        } else {
            (self.rows, self.cols, c)
        }
    }

    /// Position of `c` in the order, in `1..=rows·cols`.
    pub fn order_index(&self, c: Coord) -> Result<usize> {
        self.check(c)?;
        Ok(self.index_of(c))
    }

    pub(crate) fn index_of(&self, c: Coord) -> usize {
        let (short, long, Coord { row: i, col: j }) = self.wide(c);
        if i <= j {
            (j - i) * short + i
        } else {
            (long + j - i) * short + i
        }
    }

    /// The cell at position `pos` of the order.
    pub fn order_inverse(&self, pos: usize) -> Result<Coord> {
        if pos == 0 || pos > self.len() {
            return Err(Error::domain(format!(
                "order position {pos} outside 1..={}",
                self.len()
            )));
        }
        let (short, long) = if self.transposed {
            (self.cols, self.rows)
        } else {
            (self.rows, self.cols)
        };
        let diagonal = (pos - 1) / short;
        let i = (pos - 1) % short + 1;
        let j = (i - 1 + diagonal) % long + 1;
        let c = Coord::new(i, j);
        Ok(if self.transposed { c.transposed() } else { c })
    }

    /// All cells, listed in order.
    pub fn ordered_cells(&self) -> Vec<Coord> {
        (1..=self.len())
            .map(|p| self.order_inverse(p).expect("position in range"))
            .collect()
    }

    /// The cells of `coords` relabelled `1..=#coords` preserving grid order.
    pub fn inherited_order(&self, coords: &[Coord]) -> Result<CoordBlock> {
        if coords.is_empty() {
            return Err(Error::domain("cannot order an empty coordinate set"));
        }
        let mut seen = BTreeSet::new();
        let mut indexed = Vec::with_capacity(coords.len());
        for &c in coords {
            self.check(c)?;
            if !seen.insert(c) {
                return Err(Error::domain(format!("duplicate coordinate {c}")));
            }
            indexed.push((self.index_of(c), c));
        }
        indexed.sort_unstable();
        Ok(CoordBlock {
            grid_index: indexed.iter().map(|&(p, _)| p).collect(),
            coords: indexed.into_iter().map(|(_, c)| c).collect(),
        })
    }
}

/// A nonempty set of cells listed in the order inherited from a grid.
///
/// `coords[r]` has inherited rank `r + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordBlock {
    coords: Vec<Coord>,
    grid_index: Vec<usize>,
}

impl CoordBlock {
    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    /// Positions of the cells in the parent grid's order, ascending.
    pub fn grid_indices(&self) -> &[usize] {
        &self.grid_index
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// 1-based inherited rank of `c`, if it belongs to the block.
    pub fn rank(&self, c: Coord) -> Option<usize> {
        self.coords.iter().position(|&x| x == c).map(|r| r + 1)
    }

    /// Cell holding inherited rank `rank`.
    pub fn at_rank(&self, rank: usize) -> Option<Coord> {
        rank.checked_sub(1).and_then(|r| self.coords.get(r).copied())
    }

    /// Consecutive run of `len` cells starting at rank `start` (1-based).
    pub fn segment(&self, start: usize, len: usize) -> Result<CoordBlock> {
        if start == 0 || len == 0 || start - 1 + len > self.len() {
            return Err(Error::domain(format!(
                "segment {start}..{} outside 1..={}",
                start + len,
                self.len()
            )));
        }
        let r = start - 1..start - 1 + len;
        Ok(CoordBlock {
            coords: self.coords[r.clone()].to_vec(),
            grid_index: self.grid_index[r].to_vec(),
        })
    }

    /// Restriction to a subset, keeping the inherited ranks' relative order.
    pub fn restrict(&self, subset: &[Coord]) -> Result<CoordBlock> {
        if subset.is_empty() {
            return Err(Error::domain("cannot restrict to an empty set"));
        }
        let wanted: BTreeSet<Coord> = subset.iter().copied().collect();
        if wanted.len() != subset.len() {
            return Err(Error::domain("duplicate coordinate in restriction"));
        }
        let (coords, grid_index): (Vec<_>, Vec<_>) = self
            .coords
            .iter()
            .zip(&self.grid_index)
            .filter(|(c, _)| wanted.contains(c))
            .map(|(&c, &p)| (c, p))
            .unzip();
        if coords.len() != wanted.len() {
            return Err(Error::domain("restriction leaves the block"));
        }
        Ok(CoordBlock { coords, grid_index })
    }

    /// The same cells shifted by `(dr, dc)`, ranks unchanged.
    pub fn translated(&self, dr: usize, dc: usize) -> CoordBlock {
        CoordBlock {
            coords: self
                .coords
                .iter()
                .map(|c| Coord::new(c.row + dr, c.col + dc))
                .collect(),
            grid_index: self.grid_index.clone(),
        }
    }

    /// `true` iff no two cells share a row or a column.
    pub fn is_coordinate_distinct(&self) -> bool {
        window_distinct(&self.coords, self.coords.len().max(1))
    }
}

/// `true` iff every `w` consecutive cells of `cells` are pairwise in
/// distinct rows and distinct columns. Lists shorter than `w` are checked as
/// a single window.
pub fn window_distinct(cells: &[Coord], w: usize) -> bool {
    let w = w.max(1);
    cells.iter().enumerate().all(|(i, a)| {
        cells[i + 1..]
            .iter()
            .take(w - 1)
            .all(|b| a.row != b.row && a.col != b.col)
    })
}

/// Output layout for [`render_diagram`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagramFormat {
    Csv,
    Ascii,
}

/// Mark used for deleted cells.
pub const DELETED_MARK: &str = "·";

/// Renders the grid with each kept cell labelled by its inherited rank among
/// the kept cells. With no deletions the labels are the grid order itself.
pub fn render_diagram(grid: &OrderedGrid, deleted: &[Coord], format: DiagramFormat) -> Result<String> {
    let deleted: BTreeSet<Coord> = deleted.iter().copied().collect();
    for &c in &deleted {
        grid.check(c)?;
    }
    let kept: Vec<Coord> = grid
        .ordered_cells()
        .into_iter()
        .filter(|c| !deleted.contains(c))
        .collect();
    let mut labels = vec![vec![DELETED_MARK.to_string(); grid.cols]; grid.rows];
    for (rank, c) in kept.iter().enumerate() {
        labels[c.row - 1][c.col - 1] = (rank + 1).to_string();
    }

    let mut out = String::new();
    match format {
        DiagramFormat::Csv => {
            for row in &labels {
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        DiagramFormat::Ascii => {
            let width = labels
                .iter()
                .flatten()
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(1);
            for row in &labels {
                let cells: Vec<String> = row
                    .iter()
                    .map(|s| format!("{}{s}", " ".repeat(width - s.chars().count())))
                    .collect();
                out.push_str(cells.join(" ").trim_end());
                out.push('\n');
            }
        }
    }
    Ok(out)
}
