//! JSON description of a placement, enough to reproduce any block layout.
//!
//! ```json
//! { "d": 8, "dprime": 9, "k": 4, "active": [7, 8],
//!   "deleted": [[6, 8], [7, 8]], "short": "CH4", "long": "O5",
//!   "blocks": { "segments": [ { "count": 6, "slot": "short" },
//!                             { "count": 6, "slot": "long" } ] } }
//! ```
//!
//! `blocks` may instead be `{ "explicit": [ { "slot": ..., "cells": [...] } ] }`,
//! or be omitted in favour of `"split": [s, t]` (`s` short runs then `t`
//! long runs). With neither, the fewest-long-blocks split is used.

use serde::{Deserialize, Serialize};

use super::plan::{manual_plan, BlockSpec, ExplicitBlock, ManualLayout, PlacementPlan, Segment, Slot};
use crate::error::{Error, Result};
use crate::frobenius::{decompose, SplitPolicy};
use crate::order::Coord;
use crate::weighing::{Catalog, WeighingId, WeighingMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub d: usize,
    pub dprime: usize,
    pub k: usize,
    pub active: (usize, usize),
    #[serde(default)]
    pub deleted: Vec<Coord>,
    pub short: String,
    pub long: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<BlockSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<(u64, u64)>,
}

impl PlanFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: PlanFile =
            serde_json::from_str(text).map_err(|e| Error::parse(format!("plan file: {e}")))?;
        if file.blocks.is_some() && file.split.is_some() {
            return Err(Error::parse("plan file: give either `blocks` or `split`, not both"));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan file serializes")
    }

    /// Echo of an existing plan, with blocks as runs along the kept order
    /// when they are contiguous.
    pub fn from_plan(plan: &PlacementPlan) -> Self {
        let blocks = plan.blocks();
        let contiguous = blocks
            .iter()
            .flat_map(|b| b.cells.coords().iter().copied())
            .eq(plan.kept().coords().iter().copied());
        let spec = if contiguous {
            let mut segs: Vec<Segment> = Vec::new();
            for b in blocks {
                match segs.last_mut() {
                    Some(s) if s.slot == b.slot => s.count += 1,
                    _ => segs.push(Segment { count: 1, slot: b.slot }),
                }
            }
            BlockSpec::Segments(segs)
        } else {
            BlockSpec::Explicit(
                blocks
                    .iter()
                    .map(|b| ExplicitBlock {
                        slot: b.slot,
                        cells: b.cells.coords().to_vec(),
                    })
                    .collect(),
            )
        };
        PlanFile {
            d: plan.d(),
            dprime: plan.dprime(),
            k: plan.k(),
            active: (plan.active_grid().rows(), plan.active_grid().cols()),
            deleted: plan.deleted().to_vec(),
            short: plan.ingredient(Slot::Short).label.clone(),
            long: plan.ingredient(Slot::Long).label.clone(),
            blocks: Some(spec),
            split: None,
        }
    }

    /// Resolves the ingredient ids and produces a checked plan.
    pub fn resolve(&self, catalog: &Catalog) -> Result<(PlacementPlan, WeighingMatrix, WeighingMatrix)> {
        let a = catalog.resolve(&self.short.parse::<WeighingId>()?)?;
        let b = catalog.resolve(&self.long.parse::<WeighingId>()?)?;
        let blocks = match (&self.blocks, self.split) {
            (Some(spec), _) => spec.clone(),
            (None, split) => {
                let kept = (self.active.0 * self.active.1)
                    .checked_sub(self.deleted.len())
                    .ok_or_else(|| Error::plan(None, "more deletions than active cells"))?;
                let policy = match split {
                    Some((s, t)) => SplitPolicy::Fixed { a_count: s, b_count: t },
                    None => SplitPolicy::MinLongBlocks,
                };
                let dec = decompose(a.order() as u64, b.order() as u64, kept as u64, policy)?;
                BlockSpec::Segments(vec![
                    Segment { count: dec.a_count as usize, slot: Slot::Short },
                    Segment { count: dec.b_count as usize, slot: Slot::Long },
                ])
            }
        };
        let layout = ManualLayout {
            d: self.d,
            dprime: self.dprime,
            k: self.k,
            active_rows: self.active.0,
            active_cols: self.active.1,
            deleted: self.deleted.clone(),
            blocks,
        };
        let plan = manual_plan(&layout, &a, &b)?;
        Ok((plan, a, b))
    }
}

/// `SUEB3` of `C^7 ⊗ C^7` with 47 states: tail row cells `(7,1), (7,2)`
/// removed, 9 `CH3` blocks then 5 `O4` blocks.
pub fn shipped_example1() -> PlanFile {
    PlanFile::parse(include_str!("../../plans/example1.json")).expect("shipped plan parses")
}

/// `SUEB4` of `C^8 ⊗ C^9` with 54 states on a `7 × 8` active grid with
/// `(6,8), (7,8)` removed, 6 `CH4` blocks then 6 `O5` blocks.
pub fn shipped_example2() -> PlanFile {
    PlanFile::parse(include_str!("../../plans/example2.json")).expect("shipped plan parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::plan_type1;
    use crate::weighing::{fourier_matrix, builtin_o4};

    #[test]
    fn shipped_plans_resolve() {
        let cat = Catalog::builtin();
        let (p1, _, _) = shipped_example1().resolve(&cat).unwrap();
        assert_eq!(p1.cardinality(), 47);
        let (p2, a, b) = shipped_example2().resolve(&cat).unwrap();
        assert_eq!(p2.cardinality(), 54);
        assert_eq!((a.label(), b.label()), ("CH4", "O5"));
        assert_eq!(p2.blocks().len(), 12);
    }

    #[test]
    fn echo_round_trip() {
        let cat = Catalog::builtin();
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
        let echo = PlanFile::from_plan(&plan);
        let text = echo.to_json();
        let back = PlanFile::parse(&text).unwrap();
        assert_eq!(back, echo);
        let (again, _, _) = back.resolve(&cat).unwrap();
        assert!(again.same_layout(&plan));
        assert_eq!(echo.blocks, shipped_example1().blocks);
    }

    #[test]
    fn split_and_default_split() {
        let cat = Catalog::builtin();
        let mut f = shipped_example1();
        f.blocks = None;
        f.split = Some((9, 5));
        let (p, _, _) = f.resolve(&cat).unwrap();
        let (shipped, _, _) = shipped_example1().resolve(&cat).unwrap();
        assert!(p.same_layout(&shipped));
        f.split = None;
        let (p, _, _) = f.resolve(&cat).unwrap();
        assert_eq!(p.blocks().len(), 13 + 2);
    }

    #[test]
    fn malformed_files() {
        assert!(PlanFile::parse("{").is_err());
        assert!(PlanFile::parse(r#"{"d":7}"#).is_err());
        let mut v: serde_json::Value = serde_json::from_str(&shipped_example1().to_json()).unwrap();
        v["split"] = serde_json::json!([9, 5]);
        assert!(PlanFile::parse(&v.to_string()).is_err());
        v["split"] = serde_json::Value::Null;
        v["bogus"] = serde_json::json!(1);
        assert!(PlanFile::parse(&v.to_string()).is_err());
        let mut f = shipped_example1();
        f.long = "W(2,5,6)".into();
        assert!(matches!(f.resolve(&Catalog::builtin()), Err(Error::IngredientMissing(_))));
    }
}
