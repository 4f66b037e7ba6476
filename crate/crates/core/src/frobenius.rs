//! Two-coin decompositions `N = s·a + t·b` with `s, t ≥ 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How to pick among several valid `(s, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SplitPolicy {
    /// Fewest `b`-sized pieces.
    #[default]
    MinLongBlocks,
    /// A caller-supplied split, checked for validity.
    Fixed { a_count: u64, b_count: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoinDecomposition {
    pub a: u64,
    pub b: u64,
    pub total: u64,
    pub a_count: u64,
    pub b_count: u64,
}

pub fn gcd(mut x: u64, mut y: u64) -> u64 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

/// Writes `total = a_count·a + b_count·b` according to `policy`.
///
/// Succeeds for every `total ≥ (a − 1)(b − 1)` and for smaller totals that
/// happen to be representable.
pub fn decompose(a: u64, b: u64, total: u64, policy: SplitPolicy) -> Result<CoinDecomposition> {
    if a == 0 || b == 0 {
        return Err(Error::domain("coin sizes must be positive"));
    }
    if gcd(a, b) != 1 {
        return Err(Error::domain(format!("gcd({a}, {b}) ≠ 1")));
    }
    let not_representable = Error::NotRepresentable { a, b, total };
    match policy {
        SplitPolicy::MinLongBlocks => {
            // residues of t·b mod a cycle with period a, so t < a suffices
            (0..a)
                .take_while(|t| t * b <= total)
                .find(|t| (total - t * b).is_multiple_of(a))
                .map(|t| CoinDecomposition {
                    a,
                    b,
                    total,
                    a_count: (total - t * b) / a,
                    b_count: t,
                })
                .ok_or(not_representable)
        }
        SplitPolicy::Fixed { a_count, b_count } => {
            if a_count.checked_mul(a).zip(b_count.checked_mul(b)).and_then(|(x, y)| x.checked_add(y))
                == Some(total)
            {
                Ok(CoinDecomposition {
                    a,
                    b,
                    total,
                    a_count,
                    b_count,
                })
            } else {
                Err(Error::domain(format!(
                    "{a_count}·{a} + {b_count}·{b} ≠ {total}"
                )))
            }
        }
    }
}

/// Largest total with no decomposition: `ab − a − b`.
pub fn frobenius_number(a: u64, b: u64) -> Result<u64> {
    if a < 2 || b < 2 {
        return Err(Error::domain("Frobenius number needs coin sizes ≥ 2"));
    }
    if gcd(a, b) != 1 {
        return Err(Error::domain(format!("gcd({a}, {b}) ≠ 1")));
    }
    Ok(a * b - a - b)
}
