use proptest::prelude::*;

use suebk::construct::{plan_type1, Generator};
use suebk::frobenius::{decompose, frobenius_number, gcd, SplitPolicy};
use suebk::verify::{check_unextendible, Verdict};
use suebk::{Error, Tolerance};

fn representable(a: u64, b: u64, n: u64) -> bool {
    (0..=n / a).any(|s| (n - s * a).is_multiple_of(b))
}

fn coprime_pairs() -> impl Iterator<Item = (u64, u64)> {
    (2..=12u64).flat_map(|b| (1..b).filter(move |&a| gcd(a, b) == 1).map(move |a| (a, b)))
}

#[test]
fn decomposes_everything_past_the_threshold() {
    for (a, b) in coprime_pairs() {
        for n in (a - 1) * (b - 1)..=500 {
            let dec = decompose(a, b, n, SplitPolicy::MinLongBlocks).unwrap();
            assert_eq!(dec.a_count * a + dec.b_count * b, n);
            // no split uses fewer long pieces
            assert!((0..dec.b_count).all(|t| t * b > n || (n - t * b) % a != 0));
        }
    }
}

#[test]
fn frobenius_number_is_the_last_gap() {
    for (a, b) in coprime_pairs().filter(|&(a, _)| a >= 2) {
        let f = frobenius_number(a, b).unwrap();
        assert!(!representable(a, b, f));
        assert!((f + 1..=f + a * b).all(|n| representable(a, b, n)), "({a}, {b})");
        assert!(matches!(decompose(a, b, f, SplitPolicy::default()), Err(Error::NotRepresentable { .. })));
    }
}

proptest! {
    #[test]
    fn decompositions_are_exact_or_absent(a in 1u64..40, b in 1u64..40, n in 0u64..2000) {
        match decompose(a, b, n, SplitPolicy::default()) {
            Ok(dec) => prop_assert_eq!(dec.a_count * a + dec.b_count * b, n),
            Err(Error::NotRepresentable { .. }) => {
                prop_assert_eq!(gcd(a, b), 1);
                prop_assert!(!representable(a, b, n));
            }
            Err(Error::Domain(_)) => prop_assert!(gcd(a, b) != 1),
            Err(e) => prop_assert!(false, "unexpected {}", e),
        }
    }
}

#[test]
fn every_split_yields_a_certified_set() {
    let gen = Generator::default();
    let (a, b) = gen.ingredients(3).unwrap();
    let mut splits_tried = 0;
    for n in 35..=48u64 {
        for t in (0..=n / 4).filter(|t| (n - 4 * t) % 3 == 0) {
            let policy = SplitPolicy::Fixed {
                a_count: (n - 4 * t) / 3,
                b_count: t,
            };
            let plan = plan_type1(7, 7, 3, &a, &b, n as usize, policy).unwrap();
            let set = gen.build_checked(&plan, &a, &b).unwrap();
            let r = check_unextendible(&set, 3, Tolerance::default()).unwrap();
            assert_eq!(r.verdict, Verdict::Unextendible);
            splits_tried += 1;
        }
    }
    assert_eq!(splits_tried, (35..=48u64).map(|n| (0..=n / 4).filter(|t| (n - 4 * t) % 3 == 0).count()).sum::<usize>());
}
