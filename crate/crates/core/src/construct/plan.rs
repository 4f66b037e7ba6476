//! Placement plans: which cells are kept, how the kept cells are cut into
//! blocks along the inherited order, and which weighing matrix feeds each
//! block.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frobenius::{decompose, gcd, CoinDecomposition, SplitPolicy};
use crate::order::{Coord, CoordBlock, OrderedGrid};
use crate::weighing::WeighingMatrix;

/// Which of the plan's two weighing matrices feeds a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Slot {
    /// The first ingredient (order `a`).
    Short,
    /// The second ingredient (order `b`).
    Long,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ingredient {
    pub label: String,
    pub order: usize,
}

impl Ingredient {
    fn of(w: &WeighingMatrix) -> Self {
        Ingredient {
            label: w.label().to_string(),
            order: w.order(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanBlock {
    pub cells: CoordBlock,
    pub slot: Slot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `N = (m1 + i0)·m2 + f`; the tail of row `m1 + i0 + 1` is removed.
    Row { i0: usize, f: usize },
    /// `N = d·(m2 + j0) + f`; the tail of column `m2 + j0 + 1` is removed.
    Column { j0: usize, f: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanKind {
    /// Tail-row recipe on a `(q + 1) × d'` grid, `N = q·d' + r`.
    TypeOne {
        q: usize,
        r: usize,
        split: CoinDecomposition,
    },
    /// Row/column recipe for `d = m1 + s`, `d' = m2 + r`.
    TypeTwo {
        m1: usize,
        m2: usize,
        branch: Branch,
        split: CoinDecomposition,
    },
    Manual,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlacementPlan {
    pub(crate) d: usize,
    pub(crate) dprime: usize,
    pub(crate) k: usize,
    pub(crate) active: OrderedGrid,
    pub(crate) offset: (usize, usize),
    pub(crate) deleted: Vec<Coord>,
    pub(crate) kept: CoordBlock,
    pub(crate) blocks: Vec<PlanBlock>,
    pub(crate) short: Ingredient,
    pub(crate) long: Ingredient,
    pub(crate) kind: PlanKind,
}

impl PlacementPlan {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dprime(&self) -> usize {
        self.dprime
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of states the plan produces.
    pub fn cardinality(&self) -> usize {
        self.kept.len()
    }

    pub fn active_grid(&self) -> &OrderedGrid {
        &self.active
    }

    /// Row/column offset of the active grid inside `d × d'`; always `(0, 0)`.
    pub fn offset(&self) -> (usize, usize) {
        self.offset
    }

    /// Deleted cells of the active grid, in grid order.
    pub fn deleted(&self) -> &[Coord] {
        &self.deleted
    }

    pub fn kept(&self) -> &CoordBlock {
        &self.kept
    }

    pub fn blocks(&self) -> &[PlanBlock] {
        &self.blocks
    }

    pub fn ingredient(&self, slot: Slot) -> &Ingredient {
        match slot {
            Slot::Short => &self.short,
            Slot::Long => &self.long,
        }
    }

    pub fn kind(&self) -> &PlanKind {
        &self.kind
    }

    /// Cells of the ambient `d × d'` grid not covered by any block.
    pub fn complement(&self) -> Vec<Coord> {
        let kept: BTreeSet<Coord> = self
            .kept
            .coords()
            .iter()
            .map(|c| Coord::new(c.row + self.offset.0, c.col + self.offset.1))
            .collect();
        (1..=self.d)
            .flat_map(|i| (1..=self.dprime).map(move |j| Coord::new(i, j)))
            .filter(|c| !kept.contains(c))
            .collect()
    }

    /// Equal ambient shape, cells and blocks, ignoring how the plan was made.
    pub fn same_layout(&self, other: &PlacementPlan) -> bool {
        self.d == other.d
            && self.dprime == other.dprime
            && self.k == other.k
            && self.active == other.active
            && self.offset == other.offset
            && self.deleted == other.deleted
            && self.kept == other.kept
            && self.blocks == other.blocks
            && self.short.order == other.short.order
            && self.long.order == other.long.order
    }

    /// Checks every structural invariant; distinctness of each block is
    /// tested directly rather than inferred from the window arguments.
    pub fn check(&self) -> Result<()> {
        let (d, dp) = (self.d, self.dprime);
        if self.k < 2 || self.k > d.min(dp) {
            return Err(Error::plan(None, format!("k = {} outside 2..={}", self.k, d.min(dp))));
        }
        if self.active.rows() + self.offset.0 > d || self.active.cols() + self.offset.1 > dp {
            return Err(Error::plan(
                None,
                format!(
                    "active {}×{} grid does not fit in {d}×{dp}",
                    self.active.rows(),
                    self.active.cols()
                ),
            ));
        }
        let deleted: BTreeSet<Coord> = self.deleted.iter().copied().collect();
        if deleted.len() != self.deleted.len() {
            return Err(Error::plan(None, "duplicate deleted coordinate"));
        }
        if let Some(c) = deleted.iter().find(|&&c| !self.active.contains(c)) {
            return Err(Error::plan(None, format!("deleted cell {c} outside the active grid")));
        }
        let n = self.kept.len();
        if n == 0 || n >= d * dp {
            return Err(Error::plan(None, format!("cardinality {n} outside 1..{}", d * dp)));
        }
        if n + deleted.len() != self.active.len()
            || self.kept.coords().iter().any(|c| deleted.contains(c))
        {
            return Err(Error::plan(None, "kept cells are not the active grid minus deletions"));
        }

        let mut covered = BTreeSet::new();
        for (idx, block) in self.blocks.iter().enumerate() {
            let want = self.ingredient(block.slot).order;
            if block.cells.len() != want {
                return Err(Error::plan(
                    Some(idx + 1),
                    format!(
                        "size {} does not match order {want} of {}",
                        block.cells.len(),
                        self.ingredient(block.slot).label
                    ),
                ));
            }
            for &c in block.cells.coords() {
                if self.kept.rank(c).is_none() {
                    return Err(Error::plan(Some(idx + 1), format!("cell {c} is not kept")));
                }
                if !covered.insert(c) {
                    return Err(Error::plan(Some(idx + 1), format!("cell {c} already covered")));
                }
            }
            if !block.cells.is_coordinate_distinct() {
                return Err(Error::plan(
                    Some(idx + 1),
                    format!("cells {:?} repeat a row or column", block.cells.coords()),
                ));
            }
        }
        if covered.len() != n {
            return Err(Error::plan(
                None,
                format!("blocks cover {} of {n} kept cells", covered.len()),
            ));
        }
        Ok(())
    }
}

fn check_ingredients(k: usize, a: &WeighingMatrix, b: &WeighingMatrix) -> Result<()> {
    for w in [a, b] {
        if w.weight() != k {
            return Err(Error::unsupported(format!(
                "{} has weight {}, expected k = {k}",
                w.label(),
                w.weight()
            )));
        }
    }
    if gcd(a.order() as u64, b.order() as u64) != 1 {
        return Err(Error::unsupported(format!(
            "gcd(a, b) = gcd({}, {}) ≠ 1",
            a.order(),
            b.order()
        )));
    }
    Ok(())
}

/// Kept cells of `active` after `deleted`, cut into `a_count` runs of `a`
/// followed by `b_count` runs of `b`.
fn segmented(
    active: OrderedGrid,
    deleted: &[Coord],
    split: &CoinDecomposition,
) -> Result<(Vec<Coord>, CoordBlock, Vec<PlanBlock>)> {
    let gone: BTreeSet<Coord> = deleted.iter().copied().collect();
    let kept_cells: Vec<Coord> = active
        .ordered_cells()
        .into_iter()
        .filter(|c| !gone.contains(c))
        .collect();
    let kept = active.inherited_order(&kept_cells)?;
    let deleted = active.inherited_order(deleted).map(|b| b.coords().to_vec());
    let deleted = deleted.unwrap_or_default();
    let blocks = segment_blocks(&kept, &[
        (split.a_count as usize, Slot::Short, split.a as usize),
        (split.b_count as usize, Slot::Long, split.b as usize),
    ])?;
    Ok((deleted, kept, blocks))
}

/// Consecutive runs of the kept order: `(count, slot, size)` groups in order.
pub(crate) fn segment_blocks(kept: &CoordBlock, runs: &[(usize, Slot, usize)]) -> Result<Vec<PlanBlock>> {
    let total: usize = runs.iter().map(|&(c, _, s)| c * s).sum();
    if total != kept.len() {
        return Err(Error::plan(
            None,
            format!("segments cover {total} cells, {} are kept", kept.len()),
        ));
    }
    let mut blocks = Vec::new();
    let mut start = 1;
    for &(count, slot, size) in runs {
        for _ in 0..count {
            blocks.push(PlanBlock {
                cells: kept.segment(start, size)?,
                slot,
            });
            start += size;
        }
    }
    Ok(blocks)
}

/// Tail-row construction: `N = q·d' + r`, active grid `(q + 1) × d'`, the
/// first `d' − r` cells of row `q + 1` removed.
///
/// Requires `gcd(a, b) = 1`, both weights `k`, `d ≥ max(a, b) + k`,
/// `d' ≥ max(a, b) + 1` and `N ∈ [(d − k + 1)·d', d·d' − 1]`.
pub fn plan_type1(
    d: usize,
    dprime: usize,
    k: usize,
    a: &WeighingMatrix,
    b: &WeighingMatrix,
    n: usize,
    policy: SplitPolicy,
) -> Result<PlacementPlan> {
    check_ingredients(k, a, b)?;
    let big = a.order().max(b.order());
    if d < big + k {
        return Err(Error::unsupported(format!(
            "d = {d} < max{{a,b}} + k = {}",
            big + k
        )));
    }
    if dprime < big + 1 {
        return Err(Error::unsupported(format!(
            "d' = {dprime} < max{{a,b}} + 1 = {}",
            big + 1
        )));
    }
    let lo = (d - k + 1) * dprime;
    let hi = d * dprime - 1;
    if n < lo || n > hi {
        return Err(Error::unsupported(format!(
            "N = {n} outside [(d−k+1)·d', d·d'−1] = [{lo}, {hi}]"
        )));
    }
    let (q, r) = (n / dprime, n % dprime);
    let split = decompose(a.order() as u64, b.order() as u64, n as u64, policy)?;
    let active = OrderedGrid::new(q + 1, dprime)?;
    let deleted: Vec<Coord> = (1..=dprime - r).map(|i| Coord::new(q + 1, i)).collect();
    let (deleted, kept, blocks) = segmented(active, &deleted, &split)?;
    let plan = PlacementPlan {
        d,
        dprime,
        k,
        active,
        offset: (0, 0),
        deleted,
        kept,
        blocks,
        short: Ingredient::of(a),
        long: Ingredient::of(b),
        kind: PlanKind::TypeOne { q, r, split },
    };
    plan.check()?;
    Ok(plan)
}

/// Row/column construction for `d = m1 + s`, `d' = m2 + r`.
///
/// `[m1·m2, d·d')` splits into row intervals `[(m1+i)·m2, (m1+i+1)·m2)`,
/// `i < s`, and column intervals `[d·(m2+j), d·(m2+j+1))`, `j < r`. In a
/// row interval the active grid is `(m1+i0+1) × m2` minus the first
/// `m2 − f` cells of its last row; in a column interval it is
/// `d × (m2+j0+1)` minus the first `d − f` cells of its last column.
#[allow(clippy::too_many_arguments)]
pub fn plan_type2(
    d: usize,
    dprime: usize,
    k: usize,
    a: &WeighingMatrix,
    b: &WeighingMatrix,
    m1: usize,
    m2: usize,
    n: usize,
    policy: SplitPolicy,
) -> Result<PlacementPlan> {
    check_ingredients(k, a, b)?;
    if m1 > d || m2 > dprime {
        return Err(Error::unsupported(format!(
            "m1 = {m1}, m2 = {m2} exceed d = {d}, d' = {dprime}"
        )));
    }
    let (s, r) = (d - m1, dprime - m2);
    if r + s == 0 || r + s >= k {
        return Err(Error::unsupported(format!(
            "need 1 ≤ r + s < k, got r + s = {} with k = {k}",
            r + s
        )));
    }
    let big = a.order().max(b.order());
    if m1.min(m2) < big + 2 {
        return Err(Error::unsupported(format!(
            "need m1, m2 ≥ max{{a,b}} + 2 = {}, got m1 = {m1}, m2 = {m2}",
            big + 2
        )));
    }
    if n < m1 * m2 || n >= d * dprime {
        return Err(Error::domain(format!(
            "N = {n} outside [m1·m2, d·d'−1] = [{}, {}]",
            m1 * m2,
            d * dprime - 1
        )));
    }
    let split = decompose(a.order() as u64, b.order() as u64, n as u64, policy)?;
    let (active, deleted, branch) = if n < d * m2 {
        let i0 = n / m2 - m1;
        let f = n % m2;
        let last = m1 + i0 + 1;
        (
            OrderedGrid::new(last, m2)?,
            (1..=m2 - f).map(|i| Coord::new(last, i)).collect::<Vec<_>>(),
            Branch::Row { i0, f },
        )
    } else {
        let j0 = n / d - m2;
        let f = n % d;
        let last = m2 + j0 + 1;
        (
            OrderedGrid::new(d, last)?,
            (1..=d - f).map(|i| Coord::new(i, last)).collect::<Vec<_>>(),
            Branch::Column { j0, f },
        )
    };
    let (deleted, kept, blocks) = segmented(active, &deleted, &split)?;
    let plan = PlacementPlan {
        d,
        dprime,
        k,
        active,
        offset: (0, 0),
        deleted,
        kept,
        blocks,
        short: Ingredient::of(a),
        long: Ingredient::of(b),
        kind: PlanKind::TypeTwo {
            m1,
            m2,
            branch,
            split,
        },
    };
    plan.check()?;
    Ok(plan)
}

/// How a manual layout cuts the kept cells into blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockSpec {
    /// Consecutive runs along the inherited order: `count` blocks fed by
    /// `slot`, each of that ingredient's order.
    Segments(Vec<Segment>),
    /// Arbitrary cell sets.
    Explicit(Vec<ExplicitBlock>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub count: usize,
    pub slot: Slot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitBlock {
    pub slot: Slot,
    pub cells: Vec<Coord>,
}

/// A hand-specified placement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManualLayout {
    pub d: usize,
    pub dprime: usize,
    pub k: usize,
    pub active_rows: usize,
    pub active_cols: usize,
    pub deleted: Vec<Coord>,
    pub blocks: BlockSpec,
}

pub fn manual_plan(layout: &ManualLayout, a: &WeighingMatrix, b: &WeighingMatrix) -> Result<PlacementPlan> {
    let active = OrderedGrid::new(layout.active_rows, layout.active_cols)
        .map_err(|e| Error::plan(None, e.to_string()))?;
    let gone: BTreeSet<Coord> = layout.deleted.iter().copied().collect();
    if gone.len() != layout.deleted.len() {
        return Err(Error::plan(None, "duplicate deleted coordinate"));
    }
    if let Some(c) = gone.iter().find(|&&c| !active.contains(c)) {
        return Err(Error::plan(None, format!("deleted cell {c} outside the active grid")));
    }
    let kept_cells: Vec<Coord> = active
        .ordered_cells()
        .into_iter()
        .filter(|c| !gone.contains(c))
        .collect();
    let kept = active
        .inherited_order(&kept_cells)
        .map_err(|e| Error::plan(None, e.to_string()))?;
    let deleted = if layout.deleted.is_empty() {
        Vec::new()
    } else {
        active.inherited_order(&layout.deleted)?.coords().to_vec()
    };
    let order_of = |slot| match slot {
        Slot::Short => a.order(),
        Slot::Long => b.order(),
    };
    let blocks = match &layout.blocks {
        BlockSpec::Segments(segs) => {
            let runs: Vec<_> = segs.iter().map(|s| (s.count, s.slot, order_of(s.slot))).collect();
            segment_blocks(&kept, &runs)?
        }
        BlockSpec::Explicit(list) => list
            .iter()
            .enumerate()
            .map(|(i, blk)| {
                let missing = blk.cells.iter().find(|&&c| kept.rank(c).is_none());
                if let Some(c) = missing {
                    return Err(Error::plan(Some(i + 1), format!("cell {c} is not kept")));
                }
                Ok(PlanBlock {
                    cells: active
                        .inherited_order(&blk.cells)
                        .map_err(|e| Error::plan(Some(i + 1), e.to_string()))?,
                    slot: blk.slot,
                })
            })
            .collect::<Result<_>>()?,
    };
    for w in [a, b] {
        if w.weight() != layout.k {
            return Err(Error::plan(
                None,
                format!("{} has weight {}, expected k = {}", w.label(), w.weight(), layout.k),
            ));
        }
    }
    let plan = PlacementPlan {
        d: layout.d,
        dprime: layout.dprime,
        k: layout.k,
        active,
        offset: (0, 0),
        deleted,
        kept,
        blocks,
        short: Ingredient::of(a),
        long: Ingredient::of(b),
        kind: PlanKind::Manual,
    };
    plan.check()?;
    Ok(plan)
}
