//! Dense complex matrices standing in for bipartite pure states.
//!
//! A state `Σ m_ij |i⟩|j⟩` of `C^d ⊗ C^d'` is identified with the `d × d'`
//! matrix `(m_ij)`. Under that map the Hilbert–Schmidt inner product is the
//! state inner product and the singular values are the Schmidt coefficients.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::order::Coord;

pub type C64 = Complex<f64>;

/// Absolute tolerance on unit-scale quantities (singular values, inner
/// products, projector entries).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Tolerance(f64);

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-9;

    pub fn new(eps: f64) -> Result<Self> {
        if eps.is_finite() && eps >= 0.0 {
            Ok(Tolerance(eps))
        } else {
            Err(Error::domain(format!("tolerance must be finite and ≥ 0, got {eps}")))
        }
    }

    pub fn eps(self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(Self::DEFAULT_EPS)
    }
}

impl fmt::Display for Tolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.0)
    }
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix({}×{}) {:?}", self.rows(), self.cols(), self.to_row_major())
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(rows, cols))
    }

    /// The elementary matrix `E_ij` with a single unit entry at `at`.
    pub fn elementary(rows: usize, cols: usize, at: Coord) -> Result<Self> {
        let mut m = Self::zeros(rows, cols);
        m.set(at, C64::new(1.0, 0.0))?;
        Ok(m)
    }

    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::domain("matrix dimensions must be positive"));
        }
        if entries.len() != rows * cols {
            return Err(Error::domain(format!(
                "expected {} entries for a {rows}×{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(ComplexMatrix(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    pub fn from_nalgebra(m: DMatrix<C64>) -> Self {
        ComplexMatrix(m)
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    /// Entry at the 1-based position `at`.
    pub fn get(&self, at: Coord) -> Option<C64> {
        if at.row == 0 || at.col == 0 {
            return None;
        }
        self.0.get((at.row - 1, at.col - 1)).copied()
    }

    pub fn set(&mut self, at: Coord, value: C64) -> Result<()> {
        let (r, c) = self.shape();
        if at.row == 0 || at.col == 0 || at.row > r || at.col > c {
            return Err(Error::domain(format!("coordinate {at} outside {r}×{c}")));
        }
        self.0[(at.row - 1, at.col - 1)] = value;
        Ok(())
    }

    pub fn to_row_major(&self) -> Vec<C64> {
        let (r, c) = self.shape();
        (0..r)
            .flat_map(|i| (0..c).map(move |j| (i, j)))
            .map(|ij| self.0[ij])
            .collect()
    }

    pub fn scale(&self, s: f64) -> Self {
        ComplexMatrix(self.0.map(|z| z * s))
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Positions of entries with modulus above `eps`, row-major.
    pub fn support(&self, eps: f64) -> Vec<Coord> {
        let (r, c) = self.shape();
        (1..=r)
            .flat_map(|i| (1..=c).map(move |j| Coord::new(i, j)))
            .filter(|&at| self.get(at).is_some_and(|z| z.norm() > eps))
            .collect()
    }
}

/// `⟨M, N⟩ = Tr(M† N) = Σ conj(m_ij) n_ij`.
pub fn hs_inner(m: &ComplexMatrix, n: &ComplexMatrix) -> Result<C64> {
    if m.shape() != n.shape() {
        return Err(Error::domain(format!(
            "shape mismatch {:?} vs {:?}",
            m.shape(),
            n.shape()
        )));
    }
    Ok(m.0.iter().zip(n.0.iter()).map(|(a, b)| a.conj() * b).sum())
}

/// Full singular spectrum, `min(rows, cols)` values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let svd = m
        .0
        .clone()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Computation("singular value decomposition did not converge".into()))?;
    let mut values: Vec<f64> = svd.singular_values.iter().map(|s| s.abs()).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Number of singular values above `tol`.
pub fn schmidt_rank(m: &ComplexMatrix, tol: Tolerance) -> Result<usize> {
    Ok(singular_values(m)?
        .into_iter()
        .filter(|&s| s > tol.eps())
        .count())
}

/// `true` iff `m` has exactly `k` singular values above `tol`, each within
/// `tol` of `1/√k`.
pub fn is_sesk(m: &ComplexMatrix, k: usize, tol: Tolerance) -> Result<bool> {
    let max_k = m.rows().min(m.cols());
    if k < 2 || k > max_k {
        return Err(Error::domain(format!("type k = {k} outside 2..={max_k}")));
    }
    Ok(sesk_spectrum(&singular_values(m)?, k, tol))
}

pub(crate) fn sesk_spectrum(values: &[f64], k: usize, tol: Tolerance) -> bool {
    let target = 1.0 / (k as f64).sqrt();
    let nonzero: Vec<f64> = values.iter().copied().filter(|&s| s > tol.eps()).collect();
    nonzero.len() == k && nonzero.iter().all(|s| (s - target).abs() <= tol.eps())
}

/// A pure state of `C^d ⊗ C^d'`; the amplitude of `|i⟩|j⟩` sits at slot
/// `(i − 1)·d' + (j − 1)` (row-major product basis).
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    pub d: usize,
    pub dprime: usize,
    pub amplitudes: Vec<C64>,
}

impl BipartiteState {
    pub fn new(d: usize, dprime: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != d * dprime {
            return Err(Error::domain(format!(
                "expected {} amplitudes for C^{d} ⊗ C^{dprime}, got {}",
                d * dprime,
                amplitudes.len()
            )));
        }
        Ok(BipartiteState {
            d,
            dprime,
            amplitudes,
        })
    }

    pub fn inner(&self, other: &BipartiteState) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

pub fn matrix_to_state(m: &ComplexMatrix) -> BipartiteState {
    BipartiteState {
        d: m.rows(),
        dprime: m.cols(),
        amplitudes: m.to_row_major(),
    }
}

pub fn state_to_matrix(s: &BipartiteState) -> Result<ComplexMatrix> {
    ComplexMatrix::from_row_major(s.d, s.dprime, s.amplitudes.clone())
}
