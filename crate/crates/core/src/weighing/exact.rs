//! Exact Gram-matrix check in `Z[ζ]` for root orders 1, 2, 3, 4 and 6.
//!
//! Elements are pairs `(p, q)` meaning `p + q·ζ` with `ζ = i` for `n = 4`
//! and `ζ = ω = e^{2πi/3}` for `n ∈ {3, 6}`; `{1, ζ}` is a Z-basis, so a
//! sum vanishes iff both coordinates do.

use super::{RootEntry, RootMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ring {
    Integers,
    Gaussian,
    Eisenstein,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Elem(i64, i64);

impl Ring {
    fn mul(self, a: Elem, b: Elem) -> Elem {
        let (p, q, r, s) = (a.0, a.1, b.0, b.1);
        match self {
            Ring::Integers => Elem(p * r, 0),
            // ζ² = −1
            Ring::Gaussian => Elem(p * r - q * s, p * s + q * r),
            // ζ² = −1 − ζ
            Ring::Eisenstein => Elem(p * r - q * s, p * s + q * r - q * s),
        }
    }
}

fn root_table(n: u32) -> Option<(Ring, Vec<Elem>)> {
    let (ring, generator) = match n {
        1 | 2 => (Ring::Integers, Elem(-1, 0)),
        4 => (Ring::Gaussian, Elem(0, 1)),
        3 => (Ring::Eisenstein, Elem(0, 1)),
        // e^{iπ/3} = 1 + ω
        6 => (Ring::Eisenstein, Elem(1, 1)),
        _ => return None,
    };
    let mut table = vec![Elem(1, 0)];
    for _ in 1..n {
        let last = *table.last().expect("nonempty");
        table.push(ring.mul(last, generator));
    }
    Some((ring, table))
}

/// Exact test of `A·A† = k·I` with `k` the weight of the first row.
/// `None` when the root order has no exact backend.
pub fn exact_gram_is_scalar(m: &RootMatrix) -> Option<bool> {
    let n = m.root_order();
    let (_, table) = root_table(n)?;
    let rows = m.rows();
    let k = rows[0].iter().filter(|e| !e.is_zero()).count() as i64;
    for (x, rx) in rows.iter().enumerate() {
        for (y, ry) in rows.iter().enumerate() {
            let mut acc = Elem(0, 0);
            for (&a, &b) in rx.iter().zip(ry) {
                if let (RootEntry::Root(s), RootEntry::Root(t)) = (a, b) {
                    // a·conj(b) = ζ_n^{s−t}
                    let e = table[((s + n - t) % n) as usize];
                    acc = Elem(acc.0 + e.0, acc.1 + e.1);
                }
            }
            let target = if x == y { Elem(k, 0) } else { Elem(0, 0) };
            if acc != target {
                return Some(false);
            }
        }
    }
    Some(true)
}
