//! Acceptance gate. Runs without the test harness and prints one line per
//! criterion; exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use suebk::construct::{
    auto_generate, build, plan_type1, plan_type2, shipped_example2, Generator, PlanKind, SuebkSet,
};
use suebk::frobenius::{decompose, frobenius_number, gcd, SplitPolicy};
use suebk::numerics::{schmidt_rank, singular_values};
use suebk::verify::{check_unextendible, max_matching, Verdict};
use suebk::weighing::{
    fourier_matrix, builtin_o4, builtin_o5, search, validate, Catalog, RootEntry, SearchBudget,
    SearchOutcome, WeighingMatrix,
};
use suebk::{ComplexMatrix, Coord, OrderedGrid, Tolerance, C64};

fn tol() -> Tolerance {
    Tolerance::default()
}

fn within(limit: Duration, start: Instant, what: &str) {
    let took = start.elapsed();
    assert!(took < limit, "{what} took {took:?}, limit {limit:?}");
}

fn certify(set: &SuebkSet, k: usize) -> usize {
    let r = check_unextendible(set, k, tol()).unwrap();
    assert_eq!(r.verdict, Verdict::Unextendible, "N = {}: {}", set.len(), r.verdict.name());
    assert_eq!(r.complement.dimension, set.d() * set.dprime() - set.len());
    assert!((r.complement.projector_trace - r.complement.dimension as f64).abs() < 1e-9);
    r.complement.max_matching().unwrap()
}

fn example1() -> SuebkSet {
    let a = fourier_matrix(3).unwrap();
    let b = builtin_o4();
    let plan = plan_type1(7, 7, 3, &a, &b, 47, SplitPolicy::Fixed { a_count: 9, b_count: 5 }).unwrap();
    build(&plan, &a, &b).unwrap()
}

fn criterion_1() {
    let start = Instant::now();
    let set = example1();
    assert_eq!(set.len(), 47);
    let r = check_unextendible(&set, 3, tol()).unwrap();
    assert_eq!(r.verdict, Verdict::Unextendible);
    assert!(r.ortho_max_dev < 1e-9, "deviation {}", r.ortho_max_dev);
    let target = 1.0 / 3f64.sqrt();
    for (i, m) in set.matrices().iter().enumerate() {
        let s = singular_values(m).unwrap();
        let near = s.iter().filter(|v| (*v - target).abs() < 1e-9).count();
        let zero = s.iter().filter(|v| v.abs() < 1e-9).count();
        assert_eq!((near, zero), (3, 4), "state {}", i + 1);
    }
    assert_eq!(r.complement.support().unwrap(), &[Coord::new(7, 1), Coord::new(7, 2)]);
    assert_eq!(r.complement.max_matching(), Some(1));
    within(Duration::from_secs(1), start, "example 1");
}

fn criterion_2() {
    let start = Instant::now();
    let (plan, a, b) = shipped_example2().resolve(&Catalog::builtin()).unwrap();
    assert_eq!((plan.active_grid().rows(), plan.active_grid().cols()), (7, 8));
    let mut deleted = plan.deleted().to_vec();
    deleted.sort();
    assert_eq!(deleted, [Coord::new(6, 8), Coord::new(7, 8)]);
    assert_eq!((a.label(), b.label()), ("CH4", "O5"));
    let set = build(&plan, &a, &b).unwrap();
    assert_eq!((set.len(), set.d(), set.dprime()), (54, 8, 9));
    assert_eq!(certify(&set, 4), 3);
    within(Duration::from_secs(1), start, "shipped plan");

    let start = Instant::now();
    let set = auto_generate(8, 9, 4, 54).unwrap();
    assert!(matches!(set.plan().unwrap().kind(), PlanKind::TypeTwo { .. }));
    assert!(certify(&set, 4) < 4);
    within(Duration::from_secs(1), start, "auto_generate(8, 9, 4, 54)");
}

fn criterion_3() {
    let start = Instant::now();
    let gen = Generator::default();
    for (d, dprime, k, lo, hi) in [(7, 7, 3, 35, 48), (9, 6, 4, 36, 53)] {
        assert_eq!((lo, hi), ((d - k + 1) * dprime, d * dprime - 1));
        let (a, b) = gen.ingredients(k).unwrap();
        for n in lo..=hi {
            let plan = plan_type1(d, dprime, k, &a, &b, n, SplitPolicy::default()).unwrap();
            let set = gen.build_checked(&plan, &a, &b).unwrap();
            assert_eq!(set.len(), n);
            assert!(certify(&set, k) < k);
        }
    }
    within(Duration::from_secs(30), start, "Type 1 sweeps");
}

fn criterion_4() {
    let start = Instant::now();
    let gen = Generator::default();
    let (a, b) = gen.ingredients(4).unwrap();
    for n in 49..=71 {
        let plan = plan_type2(8, 9, 4, &a, &b, 7, 7, n, SplitPolicy::default()).unwrap();
        let set = gen.build_checked(&plan, &a, &b).unwrap();
        assert_eq!(set.len(), n);
        assert!(certify(&set, 4) < 4);
    }
    within(Duration::from_secs(30), start, "Type 2 sweep");
}

fn criterion_5() {
    let r = |x: f64| 1.0 / x.sqrt();
    let w = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut m = ComplexMatrix::zeros(7, 6);
    m.set(Coord::new(1, 1), C64::new(r(2.0), 0.0)).unwrap();
    m.set(Coord::new(2, 4), C64::new(0.0, r(3.0))).unwrap();
    m.set(Coord::new(3, 3), C64::new(r(12.0), 0.0)).unwrap();
    m.set(Coord::new(4, 2), w * r(24.0)).unwrap();
    m.set(Coord::new(5, 5), C64::new(r(24.0), 0.0)).unwrap();
    let s = singular_values(&m).unwrap();
    let want = [r(2.0), r(3.0), r(12.0), r(24.0), r(24.0), 0.0];
    for (got, want) in s.iter().zip(want) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
}

fn criterion_6() {
    let g = OrderedGrid::new(5, 9).unwrap();
    assert_eq!(g.order_index(Coord::new(3, 8)).unwrap(), 28);
    assert_eq!(g.order_index(Coord::new(5, 2)).unwrap(), 35);
    let g = OrderedGrid::new(7, 8).unwrap();
    assert_eq!(g.order_index(Coord::new(7, 8)).unwrap(), 14);
    assert_eq!(g.order_index(Coord::new(6, 8)).unwrap(), 20);
    for d in 2..=12 {
        for dprime in d..=12 {
            let g = OrderedGrid::new(d, dprime).unwrap();
            let mut seen = vec![false; d * dprime + 1];
            let mut cells = vec![Coord::new(0, 0); d * dprime + 1];
            for i in 1..=d {
                for j in 1..=dprime {
                    let o = g.order_index(Coord::new(i, j)).unwrap();
                    assert!(!seen[o], "{d}x{dprime}: {o} repeated");
                    seen[o] = true;
                    cells[o] = Coord::new(i, j);
                }
            }
            for a in 1..=d * dprime {
                for b in a + 1..=d * dprime {
                    let (x, y) = (cells[a], cells[b]);
                    if x.row == y.row || x.col == y.col {
                        assert!(b - a >= d - 1, "{d}x{dprime}: {x} {y}");
                    }
                }
            }
        }
    }
}

fn criterion_7() {
    for d in 2..=16 {
        let ch = fourier_matrix(d).unwrap();
        let rep = validate(ch.matrix(), tol());
        assert!(rep.valid && rep.weight == Some(d), "CH{d}");
    }
    for (w, k) in [(builtin_o4(), 3), (builtin_o5(), 4)] {
        let rep = validate(w.matrix(), tol());
        assert!(rep.valid && rep.weight == Some(k), "{}", w.label());
    }
    for (n, k, a) in [(2, 3, 4), (3, 4, 5)] {
        let start = Instant::now();
        let found = search(n, k, a, SearchBudget::default()).unwrap().found();
        within(Duration::from_secs(10), start, "search");
        let w = found.unwrap_or_else(|| panic!("no W({n},{k},{a}) found"));
        assert!(validate(w.matrix(), tol()).valid);
    }
    assert_eq!(
        search(2, 3, 5, SearchBudget::exhaustive()).unwrap(),
        SearchOutcome::Nonexistent
    );
}

fn criterion_8() {
    let representable = |a: u64, b: u64, n: u64| (0..=n / a).any(|s| (n - s * a).is_multiple_of(b));
    for b in 2..=12u64 {
        for a in 1..b {
            if gcd(a, b) != 1 {
                continue;
            }
            for n in (a - 1) * (b - 1)..=500 {
                let dec = decompose(a, b, n, SplitPolicy::default()).unwrap();
                assert_eq!(dec.a_count * a + dec.b_count * b, n);
            }
            if a >= 2 {
                let brute = (0..a * b).rev().find(|&n| !representable(a, b, n)).unwrap();
                assert_eq!(frobenius_number(a, b).unwrap(), brute, "({a}, {b})");
            } else {
                // every total is a multiple of 1, so no largest gap exists
                assert!((0..=500).all(|n| representable(a, b, n)));
            }
        }
    }
}

/// Largest set of cells with pairwise distinct rows and columns.
fn brute_matching(cells: &[Coord], rows: usize, used_cols: u32) -> usize {
    if rows == 0 {
        return 0;
    }
    let skip = brute_matching(cells, rows - 1, used_cols);
    cells
        .iter()
        .filter(|c| c.row == rows && used_cols & (1 << c.col) == 0)
        .map(|c| 1 + brute_matching(cells, rows - 1, used_cols | (1 << c.col)))
        .fold(skip, usize::max)
}

fn criterion_9() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eb_0009);
    for _ in 0..200 {
        let (d, dprime) = (rng.random_range(1..=6), rng.random_range(1..=6));
        let p: f64 = rng.random_range(0.05..0.6);
        let cells: Vec<Coord> = (1..=d)
            .flat_map(|i| (1..=dprime).map(move |j| Coord::new(i, j)))
            .filter(|_| rng.random_bool(p))
            .collect();
        let m = max_matching(&cells);
        assert_eq!(m.size, brute_matching(&cells, d, 0), "{cells:?}");
        if cells.is_empty() {
            continue;
        }
        for _ in 0..100 {
            let mut x = ComplexMatrix::zeros(d, dprime);
            for &c in &cells {
                x.set(c, C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .unwrap();
            }
            assert!(schmidt_rank(&x, Tolerance::new(1e-10).unwrap()).unwrap() <= m.size);
        }
        let mut diag = ComplexMatrix::zeros(d, dprime);
        for &c in &m.pairs {
            diag.set(c, C64::new(1.0, 0.0)).unwrap();
        }
        assert_eq!(schmidt_rank(&diag, tol()).unwrap(), m.size);
    }
}

fn criterion_10() {
    let set = example1();
    for i in 0..set.len() {
        let r = check_unextendible(&set.without(i).unwrap(), 3, tol()).unwrap();
        assert_ne!(r.verdict, Verdict::Unextendible, "dropping state {}", i + 1);
    }
    let a = fourier_matrix(3).unwrap();
    let flipped = builtin_o4().into_matrix().with_entry(1, 2, RootEntry::Root(1)).unwrap();
    let b = WeighingMatrix::assume_valid(flipped, 3, "O4 with one sign flipped");
    let plan = plan_type1(7, 7, 3, &a, &builtin_o4(), 47, SplitPolicy::Fixed { a_count: 9, b_count: 5 }).unwrap();
    let r = check_unextendible(&build(&plan, &a, &b).unwrap(), 3, tol()).unwrap();
    assert!(!r.orthonormal || !r.sesk_failures.is_empty());
    assert!(matches!(r.verdict, Verdict::Invalid { .. }));
}

fn main() {
    let criteria: [(&str, fn()); 10] = [
        ("SUEB3 in C^7 x C^7 with N = 47, split (9, 5)", criterion_1),
        ("SUEB4 in C^8 x C^9 with N = 54, shipped plan and auto_generate", criterion_2),
        ("Type 1 sweeps (7,7,3) N 35..=48 and (9,6,4) N 36..=53", criterion_3),
        ("Type 2 sweep (8,9,4) m1 = m2 = 7, N 49..=71", criterion_4),
        ("singular values of the 7 x 6 observation matrix", criterion_5),
        ("order golden values and exhaustive grid checks to 12 x 12", criterion_6),
        ("weighing matrices: CH_d, O4, O5, searches", criterion_7),
        ("two-coin decompositions and Frobenius numbers", criterion_8),
        ("matching against brute force and rank bound", criterion_9),
        ("negative controls", criterion_10),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS  {:>2}  {name}  ({secs:.2} s)", i + 1),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL  {:>2}  {name}  ({secs:.2} s): {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
