//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion (with the failing sub-checks underneath) and exits non-zero
//! if any criterion failed.

use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use pascalfib::fib::{self, bloom_wall_check, entry_point, pisano_period};
use pascalfib::laws::{self, LocalRelation};
use pascalfib::matrix::ModMatrix;
use pascalfib::modorder::{self, matrix_order_mod};
use pascalfib::pascal::{self, binomial, build_left, build_right, left_inverse, right_inverse};
use pascalfib::spectra;
use pascalfib::Verdict;

const ORDER_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

#[derive(Default)]
struct Outcome {
    checks: usize,
    failures: Vec<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Trial-division sieve, independent of the library's primality test.
fn primes_below(limit: u64) -> Vec<u64> {
    (2..limit).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0)).collect()
}

/// `F_k mod m` by plain iteration.
fn fib_mod_naive(k: u64, m: u64) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..k {
        (a, b) = (b, (a + b) % m);
    }
    a
}

fn right_pow_mod(n: usize, e: u64, p: u64) -> ModMatrix {
    build_right(n).unwrap().to_mod(p).unwrap().pow(e)
}

fn scalar_mod(n: usize, p: u64, s: i64) -> ModMatrix {
    ModMatrix::scalar(n, p, s.rem_euclid(p as i64) as u64).unwrap()
}

fn mod2_identities() -> Outcome {
    let mut o = Outcome::default();
    for n in 2..=64 {
        let l2 = build_left(n).unwrap().pow(2).unwrap().to_mod(2).unwrap();
        let r3 = build_right(n).unwrap().pow(3).unwrap().to_mod(2).unwrap();
        o.check(l2.is_identity(), || format!("L_{n}^2 != I mod 2"));
        o.check(r3.is_identity(), || format!("R_{n}^3 != I mod 2"));
    }
    o
}

fn left_closed_form() -> Outcome {
    let mut o = Outcome::default();
    for n in 1..=12 {
        for e in -3..=10 {
            let r = laws::verify_left_closed_form(n, e).unwrap();
            o.check(r.passed() && r.checked_cells == n * n, || {
                format!("n={n} e={e}: {} failing of {} cells", r.failures.len(), r.checked_cells)
            });
        }
    }
    o
}

fn lemma_recurrences() -> Outcome {
    let mut o = Outcome::default();
    for n in 2..=10 {
        let sq = laws::verify_square_recurrence(n).unwrap();
        let cu = laws::verify_cube_recurrence(n).unwrap();
        let cells = (n - 1) * (n - 1);
        o.check(sq.passed() && sq.checked_cells == cells, || format!("square n={n}: {:?}", sq.failures));
        o.check(cu.passed() && cu.checked_cells == cells, || format!("cube n={n}: {:?}", cu.failures));
    }
    o
}

fn fibonacci_recurrence() -> Outcome {
    let mut o = Outcome::default();
    for n in 2..=10 {
        for e in 1..=12 {
            let r = laws::verify_fib_recurrence(n, e).unwrap();
            o.check(r.passed() && r.checked_cells == (n - 1) * (n - 1), || {
                format!("n={n} e={e}: {:?}", r.failures)
            });
        }
    }
    o
}

fn border_formulas() -> Outcome {
    let mut o = Outcome::default();
    for n in 1..=12 {
        for e in 1..=12 {
            let r = laws::verify_border_formulas(n, e).unwrap();
            o.check(r.passed() && r.checked_cells == 2 * n - 1, || format!("n={n} e={e}: {:?}", r.failures));
        }
    }
    o
}

fn entry_points_and_periods() -> Outcome {
    let mut o = Outcome::default();
    for (m, want) in [(2, 3), (5, 5), (13, 7)] {
        let got = entry_point(m).unwrap();
        o.check(got == want, || format!("entry_point({m}) = {got}, want {want}"));
    }
    let got = pisano_period(5).unwrap();
    o.check(got == 20, || format!("pisano_period(5) = {got}, want 20"));
    for p in primes_below(200).into_iter().filter(|&p| p != 2 && p != 5) {
        let r = bloom_wall_check(p).unwrap();
        // independent recomputation of the same numbers
        let z = (1..).find(|&k| fib_mod_naive(k, p) == 0).unwrap();
        let pi = (1..).find(|&k| fib_mod_naive(k, p) == 0 && fib_mod_naive(k + 1, p) == 1).unwrap();
        o.check(r.entry_point == z && r.pisano_period == pi, || format!("p={p}: table disagrees with iteration"));
        let expected = match p % 5 {
            1 | 4 => (p - 1) % pi == 0,
            _ => (p + 1) % z == 0 && (2 * (p + 1)) % pi == 0,
        };
        o.check(expected && r.holds(), || format!("p={p}: {r:?}"));
    }
    o
}

fn order_theorems() -> Outcome {
    let mut o = Outcome::default();
    for n in 2..=8 {
        for p in ORDER_PRIMES {
            let l = build_left(n).unwrap().to_mod(p).unwrap();
            let order_l = matrix_order_mod(&l, p).unwrap();
            o.check(order_l == p, || format!("order(L_{n} mod {p}) = {order_l}, want {p}"));
            let r = modorder::verify_left_order(n, p).unwrap();
            o.check(r.verdict() == Verdict::Pass, || format!("left-order report n={n} p={p}: {r:?}"));

            let e = entry_point(p).unwrap();
            o.check(right_pow_mod(n, 4 * e, p).is_identity(), || {
                format!("R_{n}^(4*{e}) != I mod {p}")
            });
        }
    }
    let o4 = matrix_order_mod(&build_right(4).unwrap().to_mod(13).unwrap(), 28).unwrap();
    o.check(o4 == 28, || format!("order(R_4 mod 13) = {o4}, want 28"));

    // order <= 2(p+1) for every grid point, as stated
    for n in 2..=8 {
        for p in ORDER_PRIMES {
            let bound = 4 * entry_point(p).unwrap();
            let order = matrix_order_mod(&build_right(n).unwrap().to_mod(p).unwrap(), bound).unwrap();
            o.check(order <= 2 * (p + 1), || {
                format!("order(R_{n} mod {p}) = {order} exceeds 2(p+1) = {}", 2 * (p + 1))
            });
        }
    }
    o
}

fn scalar_congruences() -> Outcome {
    let mut o = Outcome::default();
    for n in 2..=8usize {
        for p in ORDER_PRIMES {
            let e = entry_point(p).unwrap();
            let k = (n / 2) as u64;
            let f = fib::fib(e - 1).mod_floor(&BigInt::from(p));
            let f: i64 = f.try_into().unwrap();
            let s = if n % 2 == 0 {
                if ((k + 1) * e) % 2 == 1 { -f } else { f }
            } else if (k * e) % 2 == 1 {
                -1
            } else {
                1
            };
            let got = right_pow_mod(n, e, p);
            o.check(got == scalar_mod(n, p, s), || format!("R_{n}^{e} mod {p} = {got}, want {s} I"));
            let r = modorder::verify_scalar_power(n, p).unwrap();
            o.check(r.theorem_checks[modorder::SIGNED_SCALAR].verdict == Verdict::Pass, || {
                format!("scalar-power report n={n} p={p}: {r:?}")
            });
        }
    }
    o
}

fn conditional_theorems() -> Outcome {
    let mut o = Outcome::default();
    o.check(fib::fib(10) == BigInt::from(55), || "F_10 != 55".into());
    for n in 1..=8 {
        o.check(right_pow_mod(n, 10, 11).is_identity(), || format!("R_{n}^10 != I mod 11"));
        let r = modorder::verify_pminus1(n, 11).unwrap();
        o.check(r.theorem_checks[modorder::P_MINUS_ONE].verdict == Verdict::Pass, || format!("{r:?}"));
    }
    for p in [2, 3, 7, 13] {
        o.check(fib_mod_naive(p + 1, p) == 0, || format!("{p} does not divide F_{}", p + 1));
        for n in 1..=8 {
            let want = scalar_mod(n, p, if n % 2 == 0 { -1 } else { 1 });
            let got = right_pow_mod(n, p + 1, p);
            o.check(got == want, || format!("R_{n}^{} mod {p} = {got}", p + 1));
            let r = modorder::verify_pplus1(n, p).unwrap();
            o.check(r.theorem_checks[modorder::P_PLUS_ONE].verdict == Verdict::Pass, || format!("{r:?}"));
        }
    }
    o
}

fn inverse_closed_forms() -> Outcome {
    let mut o = Outcome::default();
    for n in 1..=32 {
        let (l, li) = (build_left(n).unwrap(), left_inverse(n).unwrap());
        let (r, ri) = (build_right(n).unwrap(), right_inverse(n).unwrap());
        o.check(l.mul(&li).unwrap().is_identity() && li.mul(&l).unwrap().is_identity(), || {
            format!("left inverse n={n}")
        });
        o.check(r.mul(&ri).unwrap().is_identity() && ri.mul(&r).unwrap().is_identity(), || {
            format!("right inverse n={n}")
        });
    }
    o
}

fn eigen_conjecture() -> Outcome {
    let mut o = Outcome::default();
    for n in 1..=16 {
        let r = spectra::check_eigen_conjecture(n).unwrap();
        o.check(r.verdict == Verdict::Pass, || {
            format!(
                "n={n}: computed {} vs conjectured {} (first difference at degree {:?})",
                r.computed_charpoly, r.conjectured_charpoly, r.first_mismatch_degree
            )
        });
    }
    o
}

fn identity_suite() -> Outcome {
    let mut o = Outcome::default();
    for e in 1..=500 {
        let r = fib::check_identities(e).unwrap();
        o.check(r.holds(), || format!("{r:?}"));
    }
    // fib() against plain big-integer iteration
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for j in 1..=200u64 {
        (a, b) = (b.clone(), a + b);
        let via = fib::fib_via_binomials(j).unwrap();
        o.check(via == a && fib::fib(j) == a, || format!("F_{j}: binomial sum {via}, iteration {a}"));
    }
    o
}

/// Each corrupted closed form must be rejected by the machinery of some
/// criterion above, and the cells it reports must be the entries of the
/// power computed here through matrix multiplication.
fn mutation_audit() -> Outcome {
    let mut o = Outcome::default();
    let one = BigInt::one();

    // left closed form: wrong binomial at one cell
    let l = build_left(6).unwrap().pow(4).unwrap();
    let r = laws::check_closed_form("mutant", &l, 4, |i, j| {
        let v = pascal::left_power_entry(4, i, j);
        if (i, j) == (5, 3) { v + 1 } else { v }
    });
    o.check(!r.passed() && r.failures.iter().all(|w| &w.lhs == l.get(w.i, w.j)), || "left closed form mutant survived".into());
    // and a wrong exponent base
    let r = laws::check_closed_form("mutant", &l, 4, |i, j| pascal::left_power_entry(5, i, j));
    o.check(!r.passed(), || "left closed form base mutant survived".into());

    // local relation: each coefficient off by one, for the square, cube
    // and general Fibonacci recurrences
    for e in 1..=12i64 {
        let a = build_right(6).unwrap().pow(e).unwrap();
        let good = LocalRelation::fibonacci(e);
        let reference = laws::check_local_relation("reference", &a, e, &good);
        o.check(reference.passed(), || format!("unmutated relation fails at e={e}"));
        for slot in 0..4 {
            let mut bad = good.clone();
            match slot {
                0 => bad.delta += &one,
                1 => bad.alpha += &one,
                2 => bad.beta += &one,
                _ => bad.gamma += &one,
            }
            let r = laws::check_local_relation("mutant", &a, e, &bad);
            o.check(!r.passed(), || format!("relation mutant slot {slot} survived at e={e}"));
        }
    }
    // the verifier's report equals a check on an independently computed power
    for (n, e) in [(5, 3), (7, 9)] {
        let a = build_right(n).unwrap().pow(e).unwrap();
        let direct = laws::check_local_relation(laws::FIB_RECURRENCE, &a, e, &LocalRelation::fibonacci(e));
        o.check(laws::verify_fib_recurrence(n, e).unwrap() == direct, || format!("fib recurrence n={n} e={e} diverges"));
    }

    // border formulas: wrong binomial in the row, wrong exponent in the column
    // e >= 3 so that F_{e-1} != F_e and the exponent mutant is not equivalent
    for e in 3..=8u64 {
        let n = 5;
        let a = build_right(n).unwrap().pow(e as i64).unwrap();
        let r = laws::check_border(
            &a,
            e as i64,
            |j| binomial(n, j as i64 - 1) * fib::fib(e - 1).pow((n - j) as u32) * fib::fib(e).pow((j - 1) as u32),
            |i| laws::border_first_col(n, e, i),
        );
        o.check(!r.passed() && r.failures.iter().all(|w| &w.lhs == a.get(w.i, w.j)), || format!("border row mutant survived e={e}"));
        let r = laws::check_border(
            &a,
            e as i64,
            |j| laws::border_first_row(n, e, j),
            |i| fib::fib(e - 1).pow((n - i) as u32) * fib::fib(e).pow(i as u32),
        );
        o.check(!r.passed(), || format!("border column mutant survived e={e}"));
    }

    // row propagation: wrong Fibonacci input
    for e in 3..=10i64 {
        let a = build_right(6).unwrap().pow(e).unwrap();
        let (fp, fc) = (fib::fib_signed(e - 1), fib::fib_signed(e));
        o.check(laws::check_row_propagation(&a, e, &fp, &fc).passed(), || format!("row propagation fails e={e}"));
        o.check(!laws::check_row_propagation(&a, e, &fp, &(&fc + &one)).passed(), || {
            format!("row propagation mutant survived e={e}")
        });
    }

    // inverse closed form: one sign flipped
    let n = 6;
    let mut bad = right_inverse(n).unwrap();
    let v = -bad.get(3, 2).clone();
    bad.set(3, 2, v);
    o.check(!build_right(n).unwrap().mul(&bad).unwrap().is_identity(), || "inverse mutant survived".into());

    // scalar congruence: flipped sign for even n with p = 13 (scalar 5 vs 8)
    let e = entry_point(13).unwrap();
    let predicted = modorder::signed_scalar_prediction(4, 13, e);
    let flipped = (13 - predicted) % 13;
    o.check(right_pow_mod(4, e, 13).as_scalar() != Some(flipped), || "scalar sign mutant survived".into());

    // conjectured spectrum: one Lucas number off by one
    for n in 2..=10 {
        let target = if n % 2 == 0 { 1 } else { 2 };
        let bad = spectra::conjectured_charpoly_with(n, |m| {
            let v = fib::lucas(m);
            if m == target { v + 1 } else { v }
        });
        let r = spectra::compare(n, build_right(n).unwrap().charpoly(), bad);
        o.check(r.verdict == Verdict::Fail, || format!("spectrum mutant survived n={n}"));
    }
    o
}

type Criterion = (u32, &'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 13] = [
    (1, "mod-2 identities", mod2_identities),
    (2, "left power closed form", left_closed_form),
    (3, "square and cube recurrences", lemma_recurrences),
    (4, "Fibonacci-coefficient recurrence", fibonacci_recurrence),
    (5, "border formulas", border_formulas),
    (6, "entry points and periods", entry_points_and_periods),
    (7, "order theorems", order_theorems),
    (8, "scalar congruences", scalar_congruences),
    (9, "conditional theorems", conditional_theorems),
    (10, "inverse closed forms", inverse_closed_forms),
    (11, "eigenvalue conjecture", eigen_conjecture),
    (12, "Fibonacci identity suite", identity_suite),
    (13, "mutation audit", mutation_audit),
];

fn main() {
    // `cargo test -- --list` and friends
    if std::env::args().any(|a| a == "--list") {
        for (id, name, _) in CRITERIA {
            println!("criterion {id:02} {name}: test");
        }
        return;
    }
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (id, name, run) in CRITERIA {
        let label = format!("criterion {id:02} {name}");
        if !filters.is_empty() && !filters.iter().any(|f| label.contains(f.as_str())) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Outcome {
            checks: 0,
            failures: vec!["panicked".into()],
        });
        let secs = start.elapsed().as_secs_f64();
        if outcome.failures.is_empty() {
            println!("PASS  {label} ({} checks, {secs:.2}s)", outcome.checks);
        } else {
            failed += 1;
            println!(
                "FAIL  {label} ({} of {} checks failed, {secs:.2}s)",
                outcome.failures.len(),
                outcome.checks
            );
            for f in &outcome.failures {
                println!("      {f}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
