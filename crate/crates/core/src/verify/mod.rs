//! Certification of SUEBk sets.
//!
//! Orthonormality and SESk membership are checked directly. Unextendibility
//! is decided when the orthocomplement of the span is spanned by elementary
//! matrices `E_c`, `c ∈ T`: the complement then holds an SESk exactly when
//! `T` has a row–column matching of size `k`. Other complements are only
//! searched for an explicit witness.

mod matching;

use std::fmt;

use nalgebra::DMatrix;
use serde_json::{json, Value};

use crate::construct::SuebkSet;
use crate::error::{Error, Result};
use crate::numerics::{hs_inner, is_sesk, ComplexMatrix, Tolerance, C64};
use crate::order::Coord;

pub use matching::{max_matching, min_line_cover, LineCover, Matching};

/// Largest `|⟨M_i, M_j⟩ − δ_ij|` over all pairs, including `i = j`.
pub fn check_orthonormal(set: &[ComplexMatrix], tol: Tolerance) -> Result<(f64, bool)> {
    if set.is_empty() {
        return Err(Error::domain("empty set"));
    }
    let mut dev: f64 = 0.0;
    for (i, m) in set.iter().enumerate() {
        for (j, n) in set.iter().enumerate().skip(i) {
            let want = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((hs_inner(m, n)? - C64::new(want, 0.0)).norm());
        }
    }
    Ok((dev, dev <= tol.eps()))
}

/// 0-based indices of states that are not SESk.
pub fn check_sesk_all(set: &[ComplexMatrix], k: usize, tol: Tolerance) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, m) in set.iter().enumerate() {
        if !is_sesk(m, k, tol)? {
            out.push(i);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ComplementKind {
    CoordinateSupported(Vec<Coord>),
    /// `coordinate_part` lists cells whose `E_c` lies in the complement.
    NonCoordinate { coordinate_part: Vec<Coord> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplementAnalysis {
    pub d: usize,
    pub dprime: usize,
    /// `d·d' − rank` of the span.
    pub dimension: usize,
    pub kind: ComplementKind,
    /// Present when the complement is coordinate-supported.
    pub matching: Option<Matching>,
    pub projector_trace: f64,
    pub max_off_diagonal: f64,
    projector: DMatrix<C64>,
}

impl ComplementAnalysis {
    pub fn support(&self) -> Option<&[Coord]> {
        match &self.kind {
            ComplementKind::CoordinateSupported(t) => Some(t),
            ComplementKind::NonCoordinate { .. } => None,
        }
    }

    pub fn max_matching(&self) -> Option<usize> {
        self.matching.as_ref().map(|m| m.size)
    }
}

fn cell_of(idx: usize, dprime: usize) -> Coord {
    Coord::new(idx / dprime + 1, idx % dprime + 1)
}

/// Orthogonal basis of the span via SVD, returned as the columns of `U`.
fn span_basis(v: DMatrix<C64>, tol: Tolerance) -> Result<DMatrix<C64>> {
    let dim = v.nrows();
    let svd = v
        .try_svd(true, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Computation("singular value decomposition did not converge".into()))?;
    let u = svd.u.expect("u requested");
    let smax = svd.singular_values.iter().fold(0.0_f64, |a, &s| a.max(s));
    let cut = tol.eps().max(f64::EPSILON * dim as f64 * smax);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > cut)
        .collect();
    Ok(u.select_columns(&keep))
}

/// Projector onto the orthocomplement of `span(set)` inside `C^{d×d'}`,
/// classified by support.
pub fn complement_support(set: &[ComplexMatrix], tol: Tolerance) -> Result<ComplementAnalysis> {
    let (d, dprime) = match set.first() {
        Some(m) => m.shape(),
        None => return Err(Error::domain("empty set")),
    };
    if let Some(i) = set.iter().position(|m| m.shape() != (d, dprime)) {
        return Err(Error::domain(format!("state {} has shape {:?}", i + 1, set[i].shape())));
    }
    let dim = d * dprime;
    let v = DMatrix::from_fn(dim, set.len(), |r, c| set[c].as_nalgebra()[(r / dprime, r % dprime)]);
    let u = span_basis(v, tol)?;
    let projector = DMatrix::<C64>::identity(dim, dim) - &u * u.adjoint();

    let eps = tol.eps();
    let mut max_off: f64 = 0.0;
    for r in 0..dim {
        for c in 0..dim {
            if r != c {
                max_off = max_off.max(projector[(r, c)].norm());
            }
        }
    }
    let trace = (0..dim).map(|i| projector[(i, i)].re).sum::<f64>();
    let dimension = dim - u.ncols();
    // E_c lies in the complement iff P_cc = 1
    let unit_cells: Vec<Coord> = (0..dim)
        .filter(|&i| (projector[(i, i)] - C64::new(1.0, 0.0)).norm() <= eps)
        .map(|i| cell_of(i, dprime))
        .collect();
    let coordinate = max_off <= eps && unit_cells.len() == dimension;
    let (kind, matching) = if coordinate {
        let m = max_matching(&unit_cells);
        (ComplementKind::CoordinateSupported(unit_cells), Some(m))
    } else {
        (ComplementKind::NonCoordinate { coordinate_part: unit_cells }, None)
    };
    Ok(ComplementAnalysis {
        d,
        dprime,
        dimension,
        kind,
        matching,
        projector_trace: trace,
        max_off_diagonal: max_off,
        projector,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Unextendible,
    /// An SESk orthogonal to every input state.
    Extendible { witness: ComplexMatrix },
    Undecided { note: String },
    /// Orthonormality or SESk membership failed; unextendibility is moot.
    Invalid { reason: String },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Unextendible => "unextendible",
            Verdict::Extendible { .. } => "extendible",
            Verdict::Undecided { .. } => "undecided",
            Verdict::Invalid { .. } => "invalid",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub k: usize,
    pub n: usize,
    pub tol: Tolerance,
    pub ortho_max_dev: f64,
    pub orthonormal: bool,
    pub sesk_failures: Vec<usize>,
    pub complement: ComplementAnalysis,
    pub line_cover: Option<LineCover>,
    pub verdict: Verdict,
}

/// `1/√k` on each cell of `cells`.
fn diagonal_witness(d: usize, dprime: usize, cells: &[Coord], k: usize) -> Result<ComplexMatrix> {
    let mut w = ComplexMatrix::zeros(d, dprime);
    let amp = C64::new(1.0 / (k as f64).sqrt(), 0.0);
    for &c in cells.iter().take(k) {
        w.set(c, amp)?;
    }
    Ok(w)
}

fn witness_holds(set: &[ComplexMatrix], w: &ComplexMatrix, k: usize, tol: Tolerance) -> Result<bool> {
    if !is_sesk(w, k, tol)? {
        return Ok(false);
    }
    for m in set {
        if hs_inner(m, w)?.norm() > tol.eps() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Looks for an SESk among the coordinate part of a general complement and
/// among the eigenvectors of the rest.
fn search_witness(c: &ComplementAnalysis, k: usize, tol: Tolerance) -> Result<Option<ComplexMatrix>> {
    let ComplementKind::NonCoordinate { coordinate_part } = &c.kind else {
        return Ok(None);
    };
    let m = max_matching(coordinate_part);
    if m.size >= k {
        return Ok(Some(diagonal_witness(c.d, c.dprime, &m.pairs, k)?));
    }
    let mut rest = c.projector.clone();
    for cell in coordinate_part {
        let i = (cell.row - 1) * c.dprime + cell.col - 1;
        rest[(i, i)] -= C64::new(1.0, 0.0);
    }
    let svd = rest
        .try_svd(true, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Computation("singular value decomposition did not converge".into()))?;
    let u = svd.u.expect("u requested");
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s < 0.5 {
            continue;
        }
        let col = u.column(i);
        let candidate = ComplexMatrix::from_nalgebra(DMatrix::from_fn(c.d, c.dprime, |r, q| col[r * c.dprime + q]));
        if is_sesk(&candidate, k, tol)? {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}

/// Runs every check and reaches a verdict.
pub fn check_unextendible(set: &SuebkSet, k: usize, tol: Tolerance) -> Result<VerificationReport> {
    let states = set.matrices();
    let (ortho_max_dev, orthonormal) = check_orthonormal(states, tol)?;
    let sesk_failures = check_sesk_all(states, k, tol)?;
    let complement = complement_support(states, tol)?;
    let line_cover = complement.support().map(min_line_cover);

    let verdict = if !orthonormal || !sesk_failures.is_empty() {
        let mut why = Vec::new();
        if !orthonormal {
            why.push(format!("orthonormality deviation {ortho_max_dev:e} exceeds {tol}"));
        }
        if !sesk_failures.is_empty() {
            why.push(format!("{} state(s) are not SES{k}", sesk_failures.len()));
        }
        Verdict::Invalid { reason: why.join("; ") }
    } else if let Some(m) = &complement.matching {
        if m.size < k {
            Verdict::Unextendible
        } else {
            let w = diagonal_witness(set.d(), set.dprime(), &m.pairs, k)?;
            if witness_holds(states, &w, k, tol)? {
                Verdict::Extendible { witness: w }
            } else {
                Verdict::Undecided {
                    note: "matching witness failed its own check".into(),
                }
            }
        }
    } else {
        match search_witness(&complement, k, tol)? {
            Some(w) if witness_holds(states, &w, k, tol)? => Verdict::Extendible { witness: w },
            _ => Verdict::Undecided {
                note: format!(
                    "complement is not spanned by elementary matrices; SES{k}-freeness of a \
                     general subspace is not decided"
                ),
            },
        }
    };

    Ok(VerificationReport {
        k,
        n: states.len(),
        tol,
        ortho_max_dev,
        orthonormal,
        sesk_failures,
        complement,
        line_cover,
        verdict,
    })
}

fn coords_json(cells: &[Coord]) -> Value {
    Value::Array(cells.iter().map(|c| json!([c.row, c.col])).collect())
}

impl VerificationReport {
    pub fn to_json(&self) -> Value {
        let c = &self.complement;
        let kind = match &c.kind {
            ComplementKind::CoordinateSupported(t) => json!({ "coordinate_supported": coords_json(t) }),
            ComplementKind::NonCoordinate { coordinate_part } => {
                json!({ "non_coordinate": { "coordinate_part": coords_json(coordinate_part) } })
            }
        };
        let verdict = match &self.verdict {
            Verdict::Unextendible => json!({ "name": "unextendible" }),
            Verdict::Extendible { witness } => json!({
                "name": "extendible",
                "witness_support": coords_json(&witness.support(self.tol.eps())),
                "witness": witness.to_row_major().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            }),
            Verdict::Undecided { note } => json!({ "name": "undecided", "note": note }),
            Verdict::Invalid { reason } => json!({ "name": "invalid", "reason": reason }),
        };
        json!({
            "d": c.d,
            "dprime": c.dprime,
            "k": self.k,
            "n": self.n,
            "tolerance": self.tol.eps(),
            "ortho_max_dev": self.ortho_max_dev,
            "orthonormal": self.orthonormal,
            "sesk_failures": self.sesk_failures,
            "complement": {
                "dimension": c.dimension,
                "projector_trace": c.projector_trace,
                "max_off_diagonal": c.max_off_diagonal,
                "kind": kind,
                "max_matching": c.max_matching(),
                "matching": c.matching.as_ref().map(|m| coords_json(&m.pairs)),
                "line_cover": self.line_cover.as_ref().map(|l| json!({ "rows": l.rows, "cols": l.cols })),
            },
            "verdict": verdict,
        })
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.complement;
        let show = |cells: &[Coord]| cells.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(f, "states        {} in C^{} x C^{}, k = {}", self.n, c.d, c.dprime, self.k)?;
        writeln!(f, "tolerance     {}", self.tol)?;
        writeln!(
            f,
            "orthonormal   {} (max deviation {:e})",
            if self.orthonormal { "yes" } else { "no" },
            self.ortho_max_dev
        )?;
        if self.sesk_failures.is_empty() {
            writeln!(f, "SES{}          all", self.k)?;
        } else {
            let idx: Vec<String> = self.sesk_failures.iter().map(|i| (i + 1).to_string()).collect();
            writeln!(f, "SES{}          failing states {}", self.k, idx.join(" "))?;
        }
        writeln!(f, "complement    dimension {} (trace {:.12})", c.dimension, c.projector_trace)?;
        match &c.kind {
            ComplementKind::CoordinateSupported(t) => writeln!(f, "support       {}", show(t))?,
            ComplementKind::NonCoordinate { coordinate_part } => writeln!(
                f,
                "support       not coordinate (off-diagonal {:e}); coordinate part {}",
                c.max_off_diagonal,
                show(coordinate_part)
            )?,
        }
        if let Some(m) = &c.matching {
            writeln!(f, "max matching  {} [{}]", m.size, show(&m.pairs))?;
        }
        if let Some(l) = &self.line_cover {
            writeln!(f, "line cover    rows {:?} cols {:?}", l.rows, l.cols)?;
        }
        match &self.verdict {
            Verdict::Extendible { witness } => {
                write!(f, "verdict       extendible, witness on {}", show(&witness.support(self.tol.eps())))
            }
            Verdict::Undecided { note } => write!(f, "verdict       undecided: {note}"),
            Verdict::Invalid { reason } => write!(f, "verdict       invalid: {reason}"),
            Verdict::Unextendible => write!(f, "verdict       unextendible"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build, shipped_example1, shipped_example2};
    use crate::numerics::tests::observation_matrix;
    use crate::weighing::Catalog;

    fn example1() -> SuebkSet {
        let (plan, a, b) = shipped_example1().resolve(&Catalog::builtin()).unwrap();
        build(&plan, &a, &b).unwrap()
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn orthonormality() {
        let set = example1();
        let (dev, ok) = check_orthonormal(set.matrices(), tol()).unwrap();
        assert!(ok && dev < 1e-9);
        let mut dup = set.matrices().to_vec();
        dup.push(dup[0].clone());
        assert!(!check_orthonormal(&dup, tol()).unwrap().1);
        let one = [ComplexMatrix::elementary(2, 3, Coord::new(1, 1)).unwrap()];
        assert_eq!(check_orthonormal(&one, tol()).unwrap(), (0.0, true));
        let mixed = [one[0].clone(), ComplexMatrix::zeros(3, 2)];
        assert!(check_orthonormal(&mixed, tol()).is_err());
    }

    #[test]
    fn sesk_membership() {
        let set = example1();
        assert!(check_sesk_all(set.matrices(), 3, tol()).unwrap().is_empty());
        assert_eq!(check_sesk_all(set.matrices(), 4, tol()).unwrap().len(), 47);
        let d = ComplexMatrix::from_nalgebra(DMatrix::from_fn(7, 6, |i, j| {
            if i == j && i < 5 {
                C64::new(1.0 / 5f64.sqrt(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }));
        assert_eq!(check_sesk_all(&[d, observation_matrix()], 5, tol()).unwrap(), vec![1]);
    }

    #[test]
    fn complement_examples() {
        let c = complement_support(example1().matrices(), tol()).unwrap();
        assert_eq!(c.support().unwrap(), &[Coord::new(7, 1), Coord::new(7, 2)]);
        assert_eq!(c.dimension, 2);
        assert!((c.projector_trace - 2.0).abs() < 1e-9);
        assert_eq!(c.max_matching(), Some(1));

        let e11 = ComplexMatrix::elementary(2, 2, Coord::new(1, 1)).unwrap();
        let c = complement_support(&[e11], tol()).unwrap();
        assert_eq!(c.support().unwrap(), &[Coord::new(1, 2), Coord::new(2, 1), Coord::new(2, 2)]);

        let h = 1.0 / 2f64.sqrt();
        let mut plus = ComplexMatrix::zeros(2, 2);
        plus.set(Coord::new(1, 1), C64::new(h, 0.0)).unwrap();
        plus.set(Coord::new(1, 2), C64::new(h, 0.0)).unwrap();
        let c = complement_support(&[plus], tol()).unwrap();
        assert_eq!(
            c.kind,
            ComplementKind::NonCoordinate {
                coordinate_part: vec![Coord::new(2, 1), Coord::new(2, 2)]
            }
        );
        assert!((c.max_off_diagonal - 0.5).abs() < 1e-12);
    }

    #[test]
    fn example_verdicts() {
        let r = check_unextendible(&example1(), 3, tol()).unwrap();
        assert_eq!(r.verdict, Verdict::Unextendible);
        assert_eq!(r.line_cover.as_ref().unwrap().len(), 1);

        let (plan, a, b) = shipped_example2().resolve(&Catalog::builtin()).unwrap();
        let r = check_unextendible(&build(&plan, &a, &b).unwrap(), 4, tol()).unwrap();
        assert_eq!(r.verdict, Verdict::Unextendible);
        assert_eq!(r.complement.max_matching(), Some(3));
        assert_eq!(r.complement.dimension, 18);
    }

    #[test]
    fn dropped_state_is_a_witness() {
        let set = example1();
        let r = check_unextendible(&set.without(10).unwrap(), 3, tol()).unwrap();
        let Verdict::Extendible { witness } = &r.verdict else {
            panic!("expected a witness, got {}", r.verdict.name());
        };
        assert!(hs_inner(witness, &set.matrices()[10]).unwrap().norm() > 1.0 - 1e-9);
        assert!(is_sesk(witness, 3, tol()).unwrap());
    }

    #[test]
    fn coordinate_witness() {
        // (E11 ± E22)/√2 leave the other seven cells of a 3x3 grid free
        let h = 1.0 / 2f64.sqrt();
        let states: Vec<ComplexMatrix> = [1.0, -1.0]
            .iter()
            .map(|&s| {
                let mut m = ComplexMatrix::zeros(3, 3);
                m.set(Coord::new(1, 1), C64::new(h, 0.0)).unwrap();
                m.set(Coord::new(2, 2), C64::new(s * h, 0.0)).unwrap();
                m
            })
            .collect();
        let set = SuebkSet::from_matrices(3, 3, 2, states).unwrap();
        let r = check_unextendible(&set, 2, tol()).unwrap();
        assert_eq!(r.complement.dimension, 7);
        assert_eq!(r.complement.max_matching(), Some(3));
        let Verdict::Extendible { witness } = &r.verdict else {
            panic!("expected a witness");
        };
        assert!(witness_holds(set.matrices(), witness, 2, tol()).unwrap());
    }

    #[test]
    fn scaled_state_is_invalid() {
        let mut m = example1().into_matrices();
        m[0] = m[0].scale(0.9);
        let set = SuebkSet::from_matrices(7, 7, 3, m).unwrap();
        let r = check_unextendible(&set, 3, tol()).unwrap();
        assert!(!r.orthonormal);
        assert_eq!(r.verdict.name(), "invalid");
        assert!(r.to_string().contains("verdict       invalid"));
        assert_eq!(r.to_json()["verdict"]["name"], "invalid");
    }
}
