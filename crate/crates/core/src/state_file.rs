//! Interchange format for sets of states.
//!
//! A JSON object with the dimensions, `k`, `n`, a provenance record and one
//! line per state holding its `d·d'` row-major entries as `[re, im]` pairs.
//! Numbers use the shortest decimal that reads back to the same `f64`, so a
//! parse followed by a write reproduces the file byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::construct::{PlanFile, PlanKind, Provenance, SuebkSet};
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, C64};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    /// `type1`, `type2`, `manual` or `external`.
    pub construction: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<PlanFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ingredients: Vec<String>,
    /// Block counts `(s, t)` of the short and long ingredient.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<(u64, u64)>,
}

impl Metadata {
    pub fn external() -> Self {
        Metadata {
            construction: "external".into(),
            ..Metadata::default()
        }
    }

    pub fn for_set(set: &SuebkSet) -> Self {
        let Provenance::Plan(plan) = set.provenance() else {
            return Metadata::external();
        };
        let echo = PlanFile::from_plan(plan);
        let (construction, split) = match plan.kind() {
            PlanKind::TypeOne { split, .. } => ("type1", Some((split.a_count, split.b_count))),
            PlanKind::TypeTwo { split, .. } => ("type2", Some((split.a_count, split.b_count))),
            PlanKind::Manual => ("manual", None),
        };
        Metadata {
            construction: construction.into(),
            ingredients: vec![echo.short.clone(), echo.long.clone()],
            plan: Some(echo),
            split,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSetFile {
    pub d: usize,
    pub dprime: usize,
    pub k: usize,
    pub n: usize,
    pub metadata: Metadata,
    pub states: Vec<Vec<[f64; 2]>>,
}

impl StateSetFile {
    pub fn from_set(set: &SuebkSet) -> Self {
        StateSetFile {
            d: set.d(),
            dprime: set.dprime(),
            k: set.k(),
            n: set.len(),
            metadata: Metadata::for_set(set),
            states: set
                .matrices()
                .iter()
                .map(|m| m.to_row_major().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: StateSetFile =
            serde_json::from_str(text).map_err(|e| Error::parse(format!("state file: {e}")))?;
        file.validate()?;
        Ok(file)
    }

    fn validate(&self) -> Result<()> {
        if self.d == 0 || self.dprime == 0 {
            return Err(Error::parse("state file: dimensions must be positive"));
        }
        if self.n != self.states.len() {
            return Err(Error::parse(format!(
                "state file: n = {} but {} states listed",
                self.n,
                self.states.len()
            )));
        }
        let want = self.d * self.dprime;
        for (i, s) in self.states.iter().enumerate() {
            if s.len() != want {
                return Err(Error::parse(format!(
                    "state file: state {} has {} entries, expected {want}",
                    i + 1,
                    s.len()
                )));
            }
            if s.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::parse(format!("state file: state {} has a non-finite entry", i + 1)));
            }
        }
        Ok(())
    }

    /// The states as matrices, with the `k` override if given.
    pub fn to_set(&self, k: Option<usize>) -> Result<SuebkSet> {
        let matrices = self
            .states
            .iter()
            .map(|s| {
                let entries = s.iter().map(|&[re, im]| C64::new(re, im)).collect();
                ComplexMatrix::from_row_major(self.d, self.dprime, entries)
            })
            .collect::<Result<Vec<_>>>()?;
        SuebkSet::from_matrices(self.d, self.dprime, k.unwrap_or(self.k), matrices)
    }

    pub fn to_text(&self) -> String {
        let num = |x: f64| serde_json::to_string(&x).expect("finite number");
        let mut out = String::new();
        out.push_str("{\n");
        let _ = writeln!(out, "  \"d\": {},", self.d);
        let _ = writeln!(out, "  \"dprime\": {},", self.dprime);
        let _ = writeln!(out, "  \"k\": {},", self.k);
        let _ = writeln!(out, "  \"n\": {},", self.n);
        let meta = serde_json::to_string(&self.metadata).expect("metadata serializes");
        let _ = writeln!(out, "  \"metadata\": {meta},");
        out.push_str("  \"states\": [\n");
        for (i, s) in self.states.iter().enumerate() {
            let entries: Vec<String> = s.iter().map(|[re, im]| format!("[{},{}]", num(*re), num(*im))).collect();
            let sep = if i + 1 < self.states.len() { "," } else { "" };
            let _ = writeln!(out, "    [{}]{sep}", entries.join(","));
        }
        out.push_str("  ]\n}\n");
        out
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}
