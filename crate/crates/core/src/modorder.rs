//! Multiplicative orders of `L_n` and `R_n` modulo a prime, and the
//! congruences that pin them down.
//!
//! The order of `R_n` is always searched among the divisors of
//! `4 * entry_point(p)`, which annihilates `R_n` modulo `p`. The order of
//! `L_n` is searched among the divisors of `p`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fib::{entry_point, fib_pair_mod, ResidueClass};
use crate::matrix::primes::{divisors, is_prime, pow_mod};
use crate::matrix::ModMatrix;
use crate::pascal::{left_power_entry, PascalKind};
use crate::report::Verdict;

pub const LEFT_ORDER: &str = "left-order";
pub const LEFT_CLOSED_FORM_MOD_P: &str = "left-closed-form-mod-p";
pub const SCALAR_FORM: &str = "scalar-form";
pub const SIGNED_SCALAR: &str = "signed-scalar";
pub const FOUR_E_ANNIHILATES: &str = "four-e-annihilates";
pub const ORDER_DIVIDES_FOUR_E: &str = "order-divides-4e";
pub const ENTRY_POINT_CONSISTENT: &str = "entry-point-consistent";
pub const P_MINUS_ONE: &str = "p-minus-1";
pub const P_PLUS_ONE: &str = "p-plus-1";
pub const ORDER_BOUND: &str = "order-bound";
pub const BOUND_MET: &str = "bound-met";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremCheck {
    pub verdict: Verdict,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderReport {
    pub matrix_kind: &'static str,
    pub n: usize,
    pub p: u64,
    /// `None` only when the annihilating bound failed and the fallback
    /// search gave up.
    pub order: Option<u64>,
    pub witness_exponent_bound: u64,
    pub theorem_checks: BTreeMap<&'static str, TheoremCheck>,
}

impl OrderReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::combine(self.theorem_checks.values().map(|c| c.verdict))
    }

    fn record(&mut self, id: &'static str, verdict: Verdict, detail: Value) {
        self.theorem_checks.insert(id, TheoremCheck { verdict, detail });
    }
}

fn require_prime(p: u64) -> Result<()> {
    if p < 2 {
        return Err(Error::BadModulus(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// Least divisor `d` of `bound` with `M^d = I`.
pub fn matrix_order_mod(m: &ModMatrix, bound: u64) -> Result<u64> {
    if bound == 0 {
        return Err(Error::Precondition("exponent bound must be positive".into()));
    }
    if m.det() == 0 {
        return Err(Error::SingularModP(m.modulus()));
    }
    if !m.pow(bound).is_identity() {
        return Err(Error::BoundNotAnnihilating(bound));
    }
    Ok(divisors(bound)
        .into_iter()
        .find(|&d| m.pow(d).is_identity())
        .expect("bound itself annihilates"))
}

/// Stepwise search for the order, giving up after `limit` products.
pub fn order_by_search(m: &ModMatrix, limit: u64) -> Option<u64> {
    let mut acc = m.clone();
    for k in 1..=limit {
        if acc.is_identity() {
            return Some(k);
        }
        acc = acc.mul(m).expect("same shape");
    }
    None
}

fn order_with_fallback(m: &ModMatrix, bound: u64) -> Result<Option<u64>> {
    match matrix_order_mod(m, bound) {
        Ok(order) => Ok(Some(order)),
        Err(Error::BoundNotAnnihilating(_)) => Ok(order_by_search(m, 64 * bound)),
        Err(e) => Err(e),
    }
}

fn new_report(kind: PascalKind, n: usize, p: u64, order: Option<u64>, bound: u64) -> OrderReport {
    OrderReport {
        matrix_kind: kind.as_str(),
        n,
        p,
        order,
        witness_exponent_bound: bound,
        theorem_checks: BTreeMap::new(),
    }
}

/// `R_n mod p` together with `e = entry_point(p)` and the order found
/// among the divisors of `4e`.
fn right_report(n: usize, p: u64) -> Result<(ModMatrix, u64, OrderReport)> {
    require_prime(p)?;
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let r = PascalKind::Right.build(n)?.to_mod(p)?;
    let e = entry_point(p)?;
    let order = order_with_fallback(&r, 4 * e)?;
    let report = new_report(PascalKind::Right, n, p, order, 4 * e);
    Ok((r, e, report))
}

/// Order of `L_n` modulo `p` is exactly `p` for `n >= 2`.
///
/// Confirmed twice: by divisor search on `L_n mod p`, and by the closed
/// form `l(e)[i,j] = e^(i-j) C(i-1, j-1)` having every off-diagonal entry
/// divisible by `p` at `e = p` and the `(2, 1)` entry nonzero for `0 < e < p`.
pub fn verify_left_order(n: usize, p: u64) -> Result<OrderReport> {
    require_prime(p)?;
    if n < 2 {
        return Err(Error::Precondition(
            "the order of L_n modulo p is p only for n >= 2".into(),
        ));
    }
    let l = PascalKind::Left.build(n)?.to_mod(p)?;
    let order = order_with_fallback(&l, p)?;
    let mut report = new_report(PascalKind::Left, n, p, order, p);
    report.record(
        LEFT_ORDER,
        Verdict::from_bool(order == Some(p)),
        json!({ "order": order, "expected": p }),
    );

    let big_p = BigInt::from(p);
    let off_diagonal_vanish = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .all(|(i, j)| (left_power_entry(p as i64, i, j) % &big_p).is_zero());
    let smaller_exponent = (1..p).find(|&e| {
        (left_power_entry(e as i64, 2, 1) % &big_p).is_zero()
    });
    report.record(
        LEFT_CLOSED_FORM_MOD_P,
        Verdict::from_bool(off_diagonal_vanish && smaller_exponent.is_none()),
        json!({ "off_diagonal_vanish_at_p": off_diagonal_vanish, "smaller_exponent": smaller_exponent }),
    );
    Ok(report)
}

/// Predicted scalar `s` with `R_n^e = s I (mod p)` at `e = entry_point(p)`:
/// `(-1)^((k+1)e) F_{e-1}` for `n = 2k`, `(-1)^(ke)` for `n = 2k + 1`.
pub fn signed_scalar_prediction(n: usize, p: u64, e: u64) -> u64 {
    let k = (n / 2) as u64;
    let (negative, magnitude) = if n.is_multiple_of(2) {
        ((k + 1) * e % 2 == 1, fib_pair_mod(e - 1, p).0)
    } else {
        (k * e % 2 == 1, 1 % p)
    };
    if negative {
        (p - magnitude) % p
    } else {
        magnitude
    }
}

/// Unsigned form `F_{e-1}^(n-1) mod p`.
pub fn scalar_prediction(n: usize, p: u64, e: u64) -> u64 {
    pow_mod(fib_pair_mod(e - 1, p).0, (n - 1) as u64, p)
}

fn entry_point_by_scan(p: u64) -> u64 {
    (1..).find(|&k| fib_pair_mod(k, p).0 == 0).expect("entry point exists")
}

/// `R_n^e mod p` at the entry point `e` is a scalar matrix with the
/// predicted signed scalar, and `R_n^(4e) = I`.
pub fn verify_scalar_power(n: usize, p: u64) -> Result<OrderReport> {
    if n < 2 {
        return Err(Error::Precondition("scalar-power check needs n >= 2".into()));
    }
    let (r, e, mut report) = right_report(n, p)?;
    let at_entry = r.pow(e);
    let observed = at_entry.as_scalar();

    let unsigned = scalar_prediction(n, p, e);
    report.record(
        SCALAR_FORM,
        Verdict::from_bool(observed == Some(unsigned)),
        json!({ "e": e, "observed_scalar": observed, "predicted": unsigned }),
    );
    let signed = signed_scalar_prediction(n, p, e);
    report.record(
        SIGNED_SCALAR,
        Verdict::from_bool(observed == Some(signed)),
        json!({ "e": e, "observed_scalar": observed, "predicted": signed }),
    );
    report.record(
        FOUR_E_ANNIHILATES,
        Verdict::from_bool(r.pow(4 * e).is_identity()),
        json!({ "exponent": 4 * e }),
    );
    report.record(
        ORDER_DIVIDES_FOUR_E,
        Verdict::from_bool(report.order.is_some_and(|o| (4 * e) % o == 0)),
        json!({ "order": report.order, "four_e": 4 * e }),
    );
    let scanned = entry_point_by_scan(p);
    report.record(
        ENTRY_POINT_CONSISTENT,
        Verdict::from_bool(scanned == e),
        json!({ "table": e, "scan": scanned }),
    );
    Ok(report)
}

/// If `p | F_{p-1}` then `R_n^(p-1) = I (mod p)`.
pub fn verify_pminus1(n: usize, p: u64) -> Result<OrderReport> {
    let (r, _, mut report) = right_report(n, p)?;
    let hypothesis = p > 2 && fib_pair_mod(p - 1, p).0 == 0;
    if hypothesis {
        let ok = r.pow(p - 1).is_identity();
        report.record(P_MINUS_ONE, Verdict::from_bool(ok), json!({ "exponent": p - 1 }));
    } else {
        report.record(
            P_MINUS_ONE,
            Verdict::HypothesisNotMet,
            json!({ "reason": "p does not divide F_{p-1}" }),
        );
    }
    Ok(report)
}

/// If `p | F_{p+1}` then `R_n^(p+1) = I` for odd `n` and `-I` for even `n`.
pub fn verify_pplus1(n: usize, p: u64) -> Result<OrderReport> {
    let (r, _, mut report) = right_report(n, p)?;
    if fib_pair_mod(p + 1, p).0 == 0 {
        let expected = if n % 2 == 1 { 1 } else { p - 1 };
        let observed = r.pow(p + 1).as_scalar();
        report.record(
            P_PLUS_ONE,
            Verdict::from_bool(observed == Some(expected % p)),
            json!({ "exponent": p + 1, "observed_scalar": observed, "expected_scalar": expected % p }),
        );
    } else {
        report.record(
            P_PLUS_ONE,
            Verdict::HypothesisNotMet,
            json!({ "reason": "p does not divide F_{p+1}" }),
        );
    }
    Ok(report)
}

/// Order of `R_n mod p` is at most `2(p + 1)`, with equality for odd
/// `p = +-2 (mod 5)` and even `n`. At `p = 2` the sign collapses
/// (`-1 = 1`) and the equality clause is reported as not applicable.
pub fn verify_order_bound(n: usize, p: u64) -> Result<OrderReport> {
    if n < 2 {
        return Err(Error::Precondition("order bound check needs n >= 2".into()));
    }
    let (_, _, mut report) = right_report(n, p)?;
    let bound = 2 * (p + 1);
    let order = report.order;
    report.record(
        ORDER_BOUND,
        Verdict::from_bool(order.is_some_and(|o| o <= bound)),
        json!({ "order": order, "bound": bound }),
    );
    let tight_case = p != 2 && ResidueClass::of(p) == ResidueClass::PlusMinusTwo && n.is_multiple_of(2);
    if tight_case {
        report.record(
            BOUND_MET,
            Verdict::from_bool(order == Some(bound)),
            json!({ "order": order, "bound": bound }),
        );
    } else {
        report.record(
            BOUND_MET,
            Verdict::HypothesisNotMet,
            json!({ "reason": "needs odd p = +-2 mod 5 and even n" }),
        );
    }
    Ok(report)
}

/// Order of `L_n` or `R_n` modulo `p`, with the kind's theorem checks.
pub fn order_report(kind: PascalKind, n: usize, p: u64) -> Result<OrderReport> {
    match kind {
        PascalKind::Left => verify_left_order(n, p),
        PascalKind::Right => {
            let mut report = verify_pminus1(n, p)?;
            let mut extras = vec![verify_pplus1(n, p)?];
            if n >= 2 {
                extras.push(verify_scalar_power(n, p)?);
                extras.push(verify_order_bound(n, p)?);
            }
            for extra in extras {
                report.theorem_checks.extend(extra.theorem_checks);
            }
            Ok(report)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pascal::{build_left, build_right};

    fn right_mod(n: usize, p: u64) -> ModMatrix {
        build_right(n).unwrap().to_mod(p).unwrap()
    }

    #[test]
    fn order_examples() {
        let l3 = build_left(3).unwrap().to_mod(2).unwrap();
        assert_eq!(matrix_order_mod(&l3, 2).unwrap(), 2);
        assert_eq!(matrix_order_mod(&right_mod(4, 13), 28).unwrap(), 28);
        let id = ModMatrix::identity(3, 7).unwrap();
        assert_eq!(matrix_order_mod(&id, 12).unwrap(), 1);
    }

    #[test]
    fn order_errors() {
        assert_eq!(
            matrix_order_mod(&right_mod(4, 13), 14),
            Err(Error::BoundNotAnnihilating(14))
        );
        let singular = ModMatrix::new(2, 5, vec![1, 2, 2, 4]).unwrap();
        assert_eq!(matrix_order_mod(&singular, 4), Err(Error::SingularModP(5)));
    }

    #[test]
    fn divisor_search_matches_stepwise_search() {
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19] {
            let e = entry_point(p).unwrap();
            for n in 1..=8 {
                let r = right_mod(n, p);
                assert_eq!(Some(matrix_order_mod(&r, 4 * e).unwrap()), order_by_search(&r, 1000));
            }
        }
    }

    #[test]
    fn left_order_examples() {
        let r = verify_left_order(2, 2).unwrap();
        assert_eq!(r.order, Some(2));
        assert_eq!(r.verdict(), Verdict::Pass);
        assert_eq!(verify_left_order(5, 7).unwrap().order, Some(7));
        assert!(verify_left_order(1, 3).is_err());
        assert!(matches!(verify_left_order(3, 9), Err(Error::NotPrime(9))));
    }

    #[test]
    fn scalar_power_examples() {
        // p = 13: e = 7, R_4^7 = -8 I = 5 I (mod 13)
        let r = verify_scalar_power(4, 13).unwrap();
        assert_eq!(r.theorem_checks[SIGNED_SCALAR].detail["observed_scalar"], json!(5));
        assert_eq!(r.order, Some(28));
        assert_eq!(r.verdict(), Verdict::Pass);
        assert_eq!(signed_scalar_prediction(4, 13, 7), 5);
        // p = 2: R_3^3 = I
        assert_eq!(signed_scalar_prediction(3, 2, 3), 1);
        assert_eq!(verify_scalar_power(3, 2).unwrap().verdict(), Verdict::Pass);
        // p = 5: R_2^5 = 3 I
        let r = verify_scalar_power(2, 5).unwrap();
        assert_eq!(r.theorem_checks[SCALAR_FORM].detail["observed_scalar"], json!(3));
        assert_eq!(r.verdict(), Verdict::Pass);
    }

    #[test]
    fn conditional_theorems() {
        for n in 1..=8 {
            let r = verify_pminus1(n, 11).unwrap();
            assert_eq!(r.theorem_checks[P_MINUS_ONE].verdict, Verdict::Pass, "n = {n}");
        }
        assert_eq!(
            verify_pminus1(3, 13).unwrap().theorem_checks[P_MINUS_ONE].verdict,
            Verdict::HypothesisNotMet
        );
        assert_eq!(
            verify_pminus1(3, 2).unwrap().theorem_checks[P_MINUS_ONE].verdict,
            Verdict::HypothesisNotMet
        );
        for p in [2u64, 3, 7, 13] {
            for n in 1..=8 {
                let r = verify_pplus1(n, p).unwrap();
                assert_eq!(r.theorem_checks[P_PLUS_ONE].verdict, Verdict::Pass, "n={n} p={p}");
            }
        }
        // R_2^4 = -I (mod 3), R_4^8 = -I (mod 7)
        assert_eq!(right_mod(2, 3).pow(4).as_scalar(), Some(2));
        assert_eq!(right_mod(3, 3).pow(4).as_scalar(), Some(1));
        assert_eq!(right_mod(4, 7).pow(8).as_scalar(), Some(6));
        assert_eq!(
            verify_pplus1(3, 11).unwrap().theorem_checks[P_PLUS_ONE].verdict,
            Verdict::HypothesisNotMet
        );
    }

    #[test]
    fn order_bound_examples() {
        let r = verify_order_bound(4, 13).unwrap();
        assert_eq!(r.order, Some(28));
        assert_eq!(r.theorem_checks[BOUND_MET].verdict, Verdict::Pass);
        let r = verify_order_bound(3, 11).unwrap();
        assert!(r.order.unwrap() <= 10);
        assert_eq!(r.verdict(), Verdict::Pass);
        let r = verify_order_bound(2, 2).unwrap();
        assert_eq!(r.order, Some(3));
        assert_eq!(r.theorem_checks[ORDER_BOUND].verdict, Verdict::Pass);
        assert_eq!(r.theorem_checks[BOUND_MET].verdict, Verdict::HypothesisNotMet);
    }

    #[test]
    fn order_bound_is_met_for_even_n() {
        for p in [3u64, 7, 13, 17] {
            for n in (2..=8).step_by(2) {
                let r = verify_order_bound(n, p).unwrap();
                assert_eq!(r.theorem_checks[BOUND_MET].verdict, Verdict::Pass, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn order_bound_fails_at_five() {
        // R_2^e = [[F_{e-1}, F_e], [F_e, F_{e+1}]], so the order of R_2 mod 5
        // is the Pisano period 20 > 2(5 + 1).
        let r = verify_order_bound(2, 5).unwrap();
        assert_eq!(r.order, Some(20));
        assert_eq!(r.theorem_checks[ORDER_BOUND].verdict, Verdict::Fail);
    }

    #[test]
    fn combined_right_report() {
        let r = order_report(PascalKind::Right, 4, 13).unwrap();
        assert_eq!(r.order, Some(28));
        for id in [SCALAR_FORM, SIGNED_SCALAR, P_MINUS_ONE, P_PLUS_ONE, ORDER_BOUND, BOUND_MET] {
            assert!(r.theorem_checks.contains_key(id), "{id}");
        }
        assert_eq!(r.verdict(), Verdict::Pass);
        let r1 = order_report(PascalKind::Right, 1, 7).unwrap();
        assert_eq!(r1.order, Some(1));
        assert!(!r1.theorem_checks.contains_key(SCALAR_FORM));
    }
}
