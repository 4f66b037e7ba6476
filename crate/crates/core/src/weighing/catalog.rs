//! Stored weighing matrices keyed by `(n, k, a)`, with a plain-text format.
//!
//! A record is a header line `n k a` followed by `a` lines of `a`
//! space-separated tokens, `.` for zero or the exponent. Records are
//! separated by blank lines; `#` starts a comment line. Writing a catalog
//! always produces the canonical layout, so parse → write is byte-stable on
//! canonical input.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use super::{fourier_matrix, builtin_o4, builtin_o5, RootEntry, RootMatrix, WeighingId, WeighingMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Catalog {
    entries: BTreeMap<(u32, usize, usize), WeighingMatrix>,
}

impl Catalog {
    pub fn empty() -> Self {
        Catalog::default()
    }

    /// `O_4` and `O_5`; Fourier matrices are generated on demand.
    pub fn builtin() -> Self {
        let mut c = Catalog::empty();
        c.insert(builtin_o4());
        c.insert(builtin_o5());
        c
    }

    pub fn insert(&mut self, w: WeighingMatrix) {
        self.entries
            .insert((w.root_order(), w.weight(), w.order()), w);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &WeighingMatrix> {
        self.entries.values()
    }

    pub fn get(&self, n: u32, k: usize, a: usize) -> Option<&WeighingMatrix> {
        self.entries.get(&(n, k, a))
    }

    /// A weight-`k` matrix of order `a`: `CH_k` when `a = k`, otherwise the
    /// stored entry with the smallest root order.
    pub fn lookup(&self, k: usize, a: usize) -> Option<WeighingMatrix> {
        if a == k && k >= 2 {
            return fourier_matrix(k).ok();
        }
        self.entries
            .iter()
            .find(|(&(_, kk, aa), _)| kk == k && aa == a)
            .map(|(_, w)| w.clone())
    }

    pub fn resolve(&self, id: &WeighingId) -> Result<WeighingMatrix> {
        match *id {
            WeighingId::Fourier(d) => fourier_matrix(d),
            WeighingId::O4 => Ok(builtin_o4()),
            WeighingId::O5 => Ok(builtin_o5()),
            WeighingId::Catalog { n, k, a } => self
                .get(n, k, a)
                .cloned()
                .ok_or_else(|| Error::IngredientMissing(format!("no {id} in catalog"))),
        }
    }

    /// Parses and validates every record; the header weight must match.
    pub fn parse(text: &str) -> Result<Self> {
        let mut catalog = Catalog::empty();
        for rec in parse_records(text)? {
            let w = WeighingMatrix::new(rec.matrix)
                .map_err(|e| Error::parse(format!("record at line {}: {e}", rec.line)))?;
            if w.weight() != rec.weight {
                return Err(Error::parse(format!(
                    "record at line {}: header weight {}, matrix weight {}",
                    rec.line,
                    rec.weight,
                    w.weight()
                )));
            }
            catalog.insert(w);
        }
        Ok(catalog)
    }

    pub fn to_text(&self) -> String {
        self.entries
            .values()
            .map(record_text)
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }

    /// Adds every record of `other`, replacing entries with equal keys.
    pub fn merge(&mut self, other: Catalog) {
        self.entries.extend(other.entries);
    }
}

/// A syntactically valid record, not yet checked as a weighing matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    /// Line of the `n k a` header.
    pub line: usize,
    /// Weight claimed by the header.
    pub weight: usize,
    pub matrix: RootMatrix,
}

/// Splits catalog text into records without validating them.
pub fn parse_records(text: &str) -> Result<Vec<Record>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut out = Vec::new();
    while let Some((lineno, header)) = lines.next() {
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(format!("line {lineno}: bad header {header:?}")))?;
        let [n, k, a] = nums[..] else {
            return Err(Error::parse(format!(
                "line {lineno}: header must be `n k a`, got {header:?}"
            )));
        };
        let n = u32::try_from(n).map_err(|_| Error::parse("root order too large"))?;
        let mut rows = Vec::with_capacity(a);
        for _ in 0..a {
            let (ln, row) = lines
                .next()
                .ok_or_else(|| Error::parse(format!("record at line {lineno}: expected {a} rows")))?;
            let entries = row
                .split_whitespace()
                .map(|t| match t {
                    "." => Ok(RootEntry::Zero),
                    t => t
                        .parse()
                        .map(RootEntry::Root)
                        .map_err(|_| Error::parse(format!("line {ln}: bad token {t:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            if entries.len() != a {
                return Err(Error::parse(format!(
                    "line {ln}: expected {a} tokens, got {}",
                    entries.len()
                )));
            }
            rows.push(entries);
        }
        let matrix = RootMatrix::new(n, rows)
            .map_err(|e| Error::parse(format!("record at line {lineno}: {e}")))?;
        out.push(Record {
            line: lineno,
            weight: k,
            matrix,
        });
    }
    Ok(out)
}

/// One catalog record, newline-terminated.
pub fn record_text(w: &WeighingMatrix) -> String {
    format!(
        "{} {} {}\n{}\n",
        w.root_order(),
        w.weight(),
        w.order(),
        w.matrix()
    )
}
