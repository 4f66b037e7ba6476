//! Generalized weighing matrices `W(n, k, a)`: `a × a` matrices whose nonzero
//! entries are `n`-th roots of unity and which satisfy `A·A† = k·I`.
//!
//! Entries are kept as exponents modulo `n`, never as floats.

mod catalog;
mod exact;
mod search;

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::numerics::{Tolerance, C64};

pub use catalog::{parse_records, record_text, Catalog, Record};
pub use exact::exact_gram_is_scalar;
pub use search::{search, SearchBudget, SearchOutcome};

/// A matrix entry: zero, or `e^{2πi·t/n}` for the stored exponent `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RootEntry {
    Zero,
    Root(u32),
}

impl RootEntry {
    pub fn is_zero(self) -> bool {
        matches!(self, RootEntry::Zero)
    }

    pub fn to_complex(self, n: u32) -> C64 {
        match self {
            RootEntry::Zero => C64::new(0.0, 0.0),
            RootEntry::Root(t) => root_of_unity(t, n),
        }
    }
}

pub(crate) fn root_of_unity(t: u32, n: u32) -> C64 {
    let t = t % n;
    // exact values where the angle is a multiple of a quarter turn
    if (4 * t).is_multiple_of(n) {
        return match 4 * t / n {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * f64::from(t) / f64::from(n))
}

/// An unvalidated square matrix of roots of unity and zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootMatrix {
    n: u32,
    rows: Vec<Vec<RootEntry>>,
}

impl RootMatrix {
    /// Reduces exponents modulo `n`. Fails on `n = 0`, an empty matrix or
    /// ragged/non-square rows.
    pub fn new(n: u32, rows: Vec<Vec<RootEntry>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("root order n must be positive"));
        }
        let a = rows.len();
        if a == 0 {
            return Err(Error::domain("empty matrix"));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != a) {
            return Err(Error::domain(format!(
                "matrix is not square: row {} has {} entries, expected {a}",
                bad + 1,
                rows[bad].len()
            )));
        }
        let rows = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|e| match e {
                        RootEntry::Root(t) => RootEntry::Root(t % n),
                        z => z,
                    })
                    .collect()
            })
            .collect();
        Ok(RootMatrix { n, rows })
    }

    /// Builds from signed integer exponents, `None` standing for zero.
    pub fn from_exponents(n: u32, rows: &[Vec<Option<i64>>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| match e {
                        None => RootEntry::Zero,
                        Some(t) => RootEntry::Root(t.rem_euclid(i64::from(n.max(1))) as u32),
                    })
                    .collect()
            })
            .collect();
        Self::new(n, rows)
    }

    pub fn root_order(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<RootEntry>] {
        &self.rows
    }

    pub fn row(&self, x: usize) -> Option<&[RootEntry]> {
        x.checked_sub(1).and_then(|i| self.rows.get(i)).map(Vec::as_slice)
    }

    pub fn to_complex(&self) -> DMatrix<C64> {
        let a = self.order();
        DMatrix::from_fn(a, a, |i, j| self.rows[i][j].to_complex(self.n))
    }

    /// Replaces the entry at 1-based `(x, y)`.
    pub fn with_entry(mut self, x: usize, y: usize, e: RootEntry) -> Result<Self> {
        let a = self.order();
        if x == 0 || y == 0 || x > a || y > a {
            return Err(Error::domain(format!("entry ({x},{y}) outside {a}×{a}")));
        }
        self.rows[x - 1][y - 1] = match e {
            RootEntry::Root(t) => RootEntry::Root(t % self.n),
            z => z,
        };
        Ok(self)
    }

    fn row_weights(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().filter(|e| !e.is_zero()).count())
            .collect()
    }

    fn col_weights(&self) -> Vec<usize> {
        (0..self.order())
            .map(|j| self.rows.iter().filter(|r| !r[j].is_zero()).count())
            .collect()
    }
}

impl fmt::Display for RootMatrix {
    /// Catalog rows: `.` for zero, otherwise the exponent.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let tokens: Vec<String> = row
                .iter()
                .map(|e| match e {
                    RootEntry::Zero => ".".to_string(),
                    RootEntry::Root(t) => t.to_string(),
                })
                .collect();
            write!(f, "{}", tokens.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub valid: bool,
    /// Common nonzero count of every row and column, when there is one.
    pub weight: Option<usize>,
    /// `max |(A·A† − k·I)_xy|`; infinite when no common weight exists.
    pub max_deviation: f64,
}

/// Checks the weighing conditions numerically: every row and column carries
/// the same number `k` of nonzeros and `A·A† = k·I` entrywise within `tol·k`.
pub fn validate(candidate: &RootMatrix, tol: Tolerance) -> ValidationReport {
    let rows = candidate.row_weights();
    let cols = candidate.col_weights();
    let k = rows[0];
    let uniform = rows.iter().chain(&cols).all(|&w| w == k);
    if !uniform || k == 0 {
        return ValidationReport {
            valid: false,
            weight: None,
            max_deviation: f64::INFINITY,
        };
    }
    let m = candidate.to_complex();
    let gram = &m * m.adjoint();
    let max_deviation = gram
        .iter()
        .enumerate()
        .map(|(idx, z)| {
            let (i, j) = (idx % gram.nrows(), idx / gram.nrows());
            let target = if i == j { k as f64 } else { 0.0 };
            (z - C64::new(target, 0.0)).norm()
        })
        .fold(0.0, f64::max);
    ValidationReport {
        valid: max_deviation <= tol.eps() * k as f64,
        weight: Some(k),
        max_deviation,
    }
}

/// A validated member of `W(n, k, a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeighingMatrix {
    matrix: RootMatrix,
    weight: usize,
    label: String,
}

impl WeighingMatrix {
    /// Validates `matrix`; labels it `W(n,k,a)`.
    pub fn new(matrix: RootMatrix) -> Result<Self> {
        let report = validate(&matrix, Tolerance::default());
        match report.weight {
            Some(k) if report.valid => {
                let label = format!("W({},{},{})", matrix.n, k, matrix.order());
                Ok(WeighingMatrix {
                    matrix,
                    weight: k,
                    label,
                })
            }
            _ => Err(Error::domain(format!(
                "not a weighing matrix (max deviation {:e})",
                report.max_deviation
            ))),
        }
    }

    /// Wraps `matrix` without validation. Used to feed deliberately
    /// corrupted ingredients to the constructions in negative tests.
    pub fn assume_valid(matrix: RootMatrix, weight: usize, label: impl Into<String>) -> Self {
        WeighingMatrix {
            matrix,
            weight,
            label: label.into(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn order(&self) -> usize {
        self.matrix.order()
    }

    pub fn root_order(&self) -> u32 {
        self.matrix.n
    }

    pub fn matrix(&self) -> &RootMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> RootMatrix {
        self.matrix
    }

    /// Row `x` (1-based) as complex values scaled by `1/√k`; unit norm.
    pub fn scaled_row(&self, x: usize) -> Result<Vec<C64>> {
        let row = self.matrix.row(x).ok_or_else(|| {
            Error::domain(format!("row {x} outside 1..={}", self.order()))
        })?;
        let s = 1.0 / (self.weight as f64).sqrt();
        Ok(row.iter().map(|e| e.to_complex(self.matrix.n) * s).collect())
    }
}

/// The discrete Fourier matrix `CH_d`, entry `(x, y) = ω_d^{(x−1)(y−1)}`.
pub fn fourier_matrix(d: usize) -> Result<WeighingMatrix> {
    if d < 2 {
        return Err(Error::domain(format!("Fourier matrix needs d ≥ 2, got {d}")));
    }
    let n = u32::try_from(d).map_err(|_| Error::domain("dimension too large"))?;
    let rows = (0..d)
        .map(|x| {
            (0..d)
                .map(|y| RootEntry::Root(((x * y) % d) as u32))
                .collect()
        })
        .collect();
    Ok(WeighingMatrix {
        matrix: RootMatrix::new(n, rows)?,
        weight: d,
        label: format!("CH{d}"),
    })
}

/// `O_4 ∈ W(2, 3, 4)`.
pub fn builtin_o4() -> WeighingMatrix {
    let z = None;
    let p = Some(0);
    let m = Some(1);
    let rows = vec![
        vec![z, p, p, p],
        vec![p, z, m, p],
        vec![p, p, z, m],
        vec![p, m, p, z],
    ];
    WeighingMatrix {
        matrix: RootMatrix::from_exponents(2, &rows).expect("static matrix"),
        weight: 3,
        label: "O4".into(),
    }
}

/// `O_5 ∈ W(3, 4, 5)`.
pub fn builtin_o5() -> WeighingMatrix {
    let z = None;
    let rows = vec![
        vec![Some(0), Some(0), Some(0), Some(0), z],
        vec![Some(0), Some(1), Some(2), z, Some(0)],
        vec![Some(0), Some(2), z, Some(1), Some(2)],
        vec![Some(0), z, Some(1), Some(2), Some(1)],
        vec![z, Some(0), Some(2), Some(1), Some(1)],
    ];
    WeighingMatrix {
        matrix: RootMatrix::from_exponents(3, &rows).expect("static matrix"),
        weight: 4,
        label: "O5".into(),
    }
}

/// Names by which plans refer to weighing matrices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WeighingId {
    /// `CH<d>`
    Fourier(usize),
    /// `O4`
    O4,
    /// `O5`
    O5,
    /// `W(n,k,a)`, resolved through a catalog.
    Catalog { n: u32, k: usize, a: usize },
}

impl fmt::Display for WeighingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeighingId::Fourier(d) => write!(f, "CH{d}"),
            WeighingId::O4 => write!(f, "O4"),
            WeighingId::O5 => write!(f, "O5"),
            WeighingId::Catalog { n, k, a } => write!(f, "W({n},{k},{a})"),
        }
    }
}

impl FromStr for WeighingId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "O4" => return Ok(WeighingId::O4),
            "O5" => return Ok(WeighingId::O5),
            _ => {}
        }
        if let Some(d) = s.strip_prefix("CH") {
            return d
                .parse()
                .map(WeighingId::Fourier)
                .map_err(|_| Error::parse(format!("bad Fourier id {s:?}")));
        }
        if let Some(inner) = s.strip_prefix("W(").and_then(|r| r.strip_suffix(')')) {
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            if let [n, k, a] = parts[..] {
                let bad = |_| Error::parse(format!("bad weighing id {s:?}"));
                return Ok(WeighingId::Catalog {
                    n: n.parse().map_err(bad)?,
                    k: k.parse().map_err(bad)?,
                    a: a.parse().map_err(bad)?,
                });
            }
        }
        Err(Error::parse(format!("unknown weighing id {s:?}")))
    }
}
