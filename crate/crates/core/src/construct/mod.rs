//! Building SUEBk sets from placement plans.
//!
//! Each block of a plan is paired with every row of its weighing matrix:
//! the row, scaled by `1/√k`, is written onto the block's cells following
//! the block's inherited order. Blocks are disjoint and the rows of a
//! weighing matrix are orthogonal, so the resulting matrices are
//! orthonormal; each has `k` unit-modulus-over-`√k` entries in distinct
//! rows and columns, so its nonzero singular values all equal `1/√k`.

mod plan;
mod plan_file;

use crate::error::{Error, Result};
use crate::frobenius::SplitPolicy;
use crate::numerics::{ComplexMatrix, Tolerance, C64};
use crate::order::CoordBlock;
use crate::verify::{check_unextendible, Verdict};
use crate::weighing::{fourier_matrix, search, Catalog, SearchBudget, SearchOutcome, WeighingMatrix};

pub use plan::{
    manual_plan, plan_type1, plan_type2, BlockSpec, Branch, ExplicitBlock, Ingredient, ManualLayout,
    PlacementPlan, PlanBlock, PlanKind, Segment, Slot,
};
pub use plan_file::{shipped_example1, shipped_example2, PlanFile};

#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Plan(Box<PlacementPlan>),
    External,
}

/// `N` matrices of shape `d × d'` claimed to form a SUEBk.
#[derive(Debug, Clone, PartialEq)]
pub struct SuebkSet {
    d: usize,
    dprime: usize,
    k: usize,
    matrices: Vec<ComplexMatrix>,
    provenance: Provenance,
}

impl SuebkSet {
    /// Wraps externally supplied matrices. Only shapes and the cardinality
    /// bound `1 ≤ N ≤ d·d' − 1` are checked here; everything else is the
    /// verifier's job.
    pub fn from_matrices(d: usize, dprime: usize, k: usize, matrices: Vec<ComplexMatrix>) -> Result<Self> {
        if matrices.is_empty() || matrices.len() >= d * dprime {
            return Err(Error::domain(format!(
                "cardinality {} outside 1..={}",
                matrices.len(),
                d * dprime - 1
            )));
        }
        if let Some(i) = matrices.iter().position(|m| m.shape() != (d, dprime)) {
            return Err(Error::domain(format!(
                "state {} has shape {:?}, expected ({d}, {dprime})",
                i + 1,
                matrices[i].shape()
            )));
        }
        Ok(SuebkSet {
            d,
            dprime,
            k,
            matrices,
            provenance: Provenance::External,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dprime(&self) -> usize {
        self.dprime
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn plan(&self) -> Option<&PlacementPlan> {
        match &self.provenance {
            Provenance::Plan(p) => Some(p),
            Provenance::External => None,
        }
    }

    /// The same states with state `index` (0-based) removed.
    pub fn without(&self, index: usize) -> Result<SuebkSet> {
        if index >= self.len() {
            return Err(Error::domain(format!("no state {index}")));
        }
        let mut matrices = self.matrices.clone();
        matrices.remove(index);
        SuebkSet::from_matrices(self.d, self.dprime, self.k, matrices)
    }

    pub fn into_matrices(self) -> Vec<ComplexMatrix> {
        self.matrices
    }
}

/// `Σ_{c ∈ block} v[rank(c)] E_c` in a `d × d'` matrix.
pub fn block_matrix(d: usize, dprime: usize, block: &CoordBlock, v: &[C64]) -> Result<ComplexMatrix> {
    if block.len() != v.len() {
        return Err(Error::domain(format!(
            "block has {} cells, vector has {} entries",
            block.len(),
            v.len()
        )));
    }
    let mut m = ComplexMatrix::zeros(d, dprime);
    for (&c, &z) in block.coords().iter().zip(v) {
        m.set(c, z)?;
    }
    Ok(m)
}

/// Emits the plan's states: blocks in plan order, and for each block one
/// state per row of its weighing matrix.
pub fn build(plan: &PlacementPlan, a: &WeighingMatrix, b: &WeighingMatrix) -> Result<SuebkSet> {
    for (slot, w) in [(Slot::Short, a), (Slot::Long, b)] {
        let want = plan.ingredient(slot);
        if w.order() != want.order || w.weight() != plan.k() {
            return Err(Error::domain(format!(
                "{} (order {}, weight {}) does not fit slot {slot:?} (order {}, weight {})",
                w.label(),
                w.order(),
                w.weight(),
                want.order,
                plan.k()
            )));
        }
    }
    let (dr, dc) = plan.offset();
    let mut matrices = Vec::with_capacity(plan.cardinality());
    for block in plan.blocks() {
        let w = match block.slot {
            Slot::Short => a,
            Slot::Long => b,
        };
        let placed = block.cells.translated(dr, dc);
        for x in 1..=w.order() {
            matrices.push(block_matrix(plan.d(), plan.dprime(), &placed, &w.scaled_row(x)?)?);
        }
    }
    let mut set = SuebkSet::from_matrices(plan.d(), plan.dprime(), plan.k(), matrices)?;
    set.provenance = Provenance::Plan(Box::new(plan.clone()));
    Ok(set)
}

/// Picks ingredients and a recipe for `(d, d', k, N)`.
#[derive(Debug, Clone)]
pub struct Generator {
    pub catalog: Catalog,
    pub budget: SearchBudget,
    pub tol: Tolerance,
    pub policy: SplitPolicy,
}

impl Default for Generator {
    fn default() -> Self {
        Generator {
            catalog: Catalog::builtin(),
            budget: SearchBudget::default(),
            tol: Tolerance::default(),
            policy: SplitPolicy::MinLongBlocks,
        }
    }
}

/// Root orders tried, in turn, when searching for a `W(n, k, k + 1)`.
pub fn candidate_root_orders(k: usize) -> Vec<u32> {
    let mut ns = vec![1, 2, 3, 4, 6];
    if let Ok(k) = u32::try_from(k) {
        if !ns.contains(&k) {
            ns.push(k);
        }
    }
    ns
}

impl Generator {
    /// `CH_k` and a weight-`k` matrix of order `k + 1`, from the catalog or
    /// by search.
    pub fn ingredients(&self, k: usize) -> Result<(WeighingMatrix, WeighingMatrix)> {
        let a = fourier_matrix(k)?;
        if let Some(b) = self.catalog.lookup(k, k + 1) {
            return Ok((a, b));
        }
        let mut undecided = Vec::new();
        for n in candidate_root_orders(k) {
            match search(n, k, k + 1, self.budget)? {
                SearchOutcome::Found(b) => return Ok((a, b)),
                SearchOutcome::Nonexistent => {}
                SearchOutcome::Unknown { .. } => undecided.push(n),
            }
        }
        let detail = if undecided.is_empty() {
            String::new()
        } else {
            format!(" (search budget exhausted for n = {undecided:?})")
        };
        Err(Error::IngredientMissing(format!(
            "no W(n,{k},{}) in the catalog or found by search{detail}",
            k + 1
        )))
    }

    /// Type II splits `(m1, m2)` admissible for `N`, best first: smallest
    /// `r + s`, then largest `m1·m2`, then fewest extra rows.
    pub fn type2_splits(d: usize, dprime: usize, k: usize, big: usize, n: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for s in 0..k.min(d + 1) {
            for r in 0..k.min(dprime + 1) {
                if r + s == 0 || r + s >= k {
                    continue;
                }
                let (m1, m2) = (d - s, dprime - r);
                if m1 >= big + 2 && m2 >= big + 2 && n >= m1 * m2 {
                    out.push((r + s, s, m1, m2));
                }
            }
        }
        out.sort_by(|x, y| x.0.cmp(&y.0).then((y.2 * y.3).cmp(&(x.2 * x.3))).then(x.1.cmp(&y.1)));
        out.into_iter().map(|(_, _, m1, m2)| (m1, m2)).collect()
    }

    /// Plans `(d, d', k, N)` with Type I if its hypotheses hold, otherwise
    /// with the best Type II split.
    pub fn plan(&self, d: usize, dprime: usize, k: usize, n: usize) -> Result<(PlacementPlan, WeighingMatrix, WeighingMatrix)> {
        if k < 2 || k > d.min(dprime) {
            return Err(Error::domain(format!("k = {k} outside 2..={}", d.min(dprime))));
        }
        if n == 0 || n >= d * dprime {
            return Err(Error::domain(format!("N = {n} outside 1..={}", d * dprime - 1)));
        }
        let big = k + 1;
        let type1 = d >= big + k && dprime > big && n >= (d - k + 1) * dprime;
        let splits = Self::type2_splits(d, dprime, k, big, n);
        if !type1 && splits.is_empty() {
            return Err(Error::unsupported(format!(
                "({d}, {dprime}, k={k}, N={n}) is covered by neither recipe: Type I needs \
                 d ≥ {} and d' ≥ {} and N ≥ (d−k+1)·d'; Type II needs m1, m2 ≥ {} with \
                 1 ≤ (d−m1)+(d'−m2) < k and N ≥ m1·m2; use a manual plan instead",
                big + k,
                big + 1,
                big + 2
            )));
        }
        let (a, b) = self.ingredients(k)?;
        if type1 {
            let plan = plan_type1(d, dprime, k, &a, &b, n, self.policy)?;
            return Ok((plan, a, b));
        }
        let (m1, m2) = splits[0];
        let plan = plan_type2(d, dprime, k, &a, &b, m1, m2, n, self.policy)?;
        Ok((plan, a, b))
    }

    /// Plans, builds and certifies.
    pub fn generate(&self, d: usize, dprime: usize, k: usize, n: usize) -> Result<SuebkSet> {
        let (plan, a, b) = self.plan(d, dprime, k, n)?;
        self.build_checked(&plan, &a, &b)
    }

    /// Builds `plan` and refuses to return a set the verifier does not
    /// certify.
    pub fn build_checked(&self, plan: &PlacementPlan, a: &WeighingMatrix, b: &WeighingMatrix) -> Result<SuebkSet> {
        let set = build(plan, a, b)?;
        let report = check_unextendible(&set, plan.k(), self.tol)?;
        match report.verdict {
            Verdict::Unextendible => Ok(set),
            ref v => Err(Error::SelfCheck(format!(
                "built set for N = {} was not certified: {}",
                set.len(),
                v.name()
            ))),
        }
    }
}

/// [`Generator::generate`] with the built-in catalog and default budget.
pub fn auto_generate(d: usize, dprime: usize, k: usize, n: usize) -> Result<SuebkSet> {
    Generator::default().generate(d, dprime, k, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{hs_inner, is_sesk};
    use crate::order::{Coord, OrderedGrid};
    use crate::weighing::{builtin_o4, builtin_o5};

    #[test]
    fn block_matrix_examples() {
        let g = OrderedGrid::new(5, 9).unwrap();
        let single = g.inherited_order(&[Coord::new(1, 1)]).unwrap();
        let e = block_matrix(5, 9, &single, &[C64::new(1.0, 0.0)]).unwrap();
        assert_eq!(e, ComplexMatrix::elementary(5, 9, Coord::new(1, 1)).unwrap());

        let p = g
            .inherited_order(&[Coord::new(1, 2), Coord::new(4, 3), Coord::new(5, 6)])
            .unwrap();
        let v = [C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(3.0, 0.0)];
        let m = block_matrix(5, 9, &p, &v).unwrap();
        assert_eq!(m.get(Coord::new(1, 2)), Some(v[0]));
        assert_eq!(m.get(Coord::new(5, 6)), Some(v[1]));
        assert_eq!(m.get(Coord::new(4, 3)), Some(v[2]));
        assert!(block_matrix(5, 9, &p, &v[..2]).is_err());

        // orthogonal vectors on the same block
        let w = [C64::new(2.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 0.0)];
        let n = block_matrix(5, 9, &p, &w).unwrap();
        assert_eq!(hs_inner(&m, &n).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn build_example_one() {
        let plan = plan_type1(
            7,
            7,
            3,
            &fourier_matrix(3).unwrap(),
            &builtin_o4(),
            47,
            SplitPolicy::Fixed { a_count: 9, b_count: 5 },
        )
        .unwrap();
        let set = build(&plan, &fourier_matrix(3).unwrap(), &builtin_o4()).unwrap();
        assert_eq!(set.len(), 47);
        for m in set.matrices() {
            assert!(is_sesk(m, 3, Tolerance::default()).unwrap());
        }
        assert!(build(&plan, &builtin_o4(), &builtin_o4()).is_err());
        assert!(set.plan().is_some());
    }

    #[test]
    fn type2_split_policy() {
        assert_eq!(Generator::type2_splits(8, 9, 4, 5, 54), vec![(7, 7)]);
        assert_eq!(Generator::type2_splits(8, 9, 4, 5, 64)[0], (8, 8));
        assert!(Generator::type2_splits(4, 5, 3, 4, 15).is_empty());
    }

    #[test]
    fn auto_generate_examples() {
        assert_eq!(auto_generate(7, 7, 3, 47).unwrap().len(), 47);
        let set = auto_generate(8, 9, 4, 54).unwrap();
        assert!(matches!(set.plan().unwrap().kind(), PlanKind::TypeTwo { m1: 7, m2: 7, .. }));
        assert!(matches!(
            auto_generate(4, 5, 3, 15),
            Err(Error::UnsupportedParameters(_))
        ));
        assert!(matches!(auto_generate(4, 5, 6, 15), Err(Error::Domain(_))));
        assert!(matches!(auto_generate(4, 5, 3, 20), Err(Error::Domain(_))));
    }

    #[test]
    fn missing_ingredient() {
        // W(n, 2, 3) is empty for every n
        let g = Generator {
            budget: SearchBudget::exhaustive(),
            ..Generator::default()
        };
        assert!(matches!(g.generate(9, 9, 2, 79), Err(Error::IngredientMissing(_))));
    }

    #[test]
    fn deterministic_output() {
        assert_eq!(auto_generate(8, 9, 4, 60).unwrap(), auto_generate(8, 9, 4, 60).unwrap());
    }

    #[test]
    fn ingredients_for_small_weights() {
        let g = Generator::default();
        assert_eq!(g.ingredients(3).unwrap().1, builtin_o4());
        assert_eq!(g.ingredients(4).unwrap().1, builtin_o5());
    }
}
