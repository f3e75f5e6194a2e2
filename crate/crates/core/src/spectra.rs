//! Exact test of the golden-ratio eigenvalue pattern of `R_n`.
//!
//! A conjugate pair `s phi^m, s phibar^m` (with `s = +-1`) has sum
//! `s L_m` and product `(phi phibar)^m = (-1)^m`, so it contributes the
//! integer quadratic `x^2 - s L_m x + (-1)^m`. The conjectured spectrum
//! therefore becomes an integer polynomial that can be compared
//! coefficient by coefficient with the characteristic polynomial.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::Result;
use crate::fib::lucas;
use crate::matrix::IntPolynomial;
use crate::pascal::build_right;
use crate::report::{decimal, Verdict};

fn sign(odd: bool) -> BigInt {
    if odd {
        BigInt::from(-1)
    } else {
        BigInt::from(1)
    }
}

/// Product of the conjugate-pair quadratics, with the Lucas numbers
/// supplied by `middle(m)`.
pub fn conjectured_charpoly_with<F>(n: usize, middle: F) -> IntPolynomial
where
    F: Fn(u64) -> BigInt,
{
    assert!(n >= 1, "dimension must be at least 1");
    let k = n / 2;
    let mut poly = if n.is_multiple_of(2) {
        IntPolynomial::one()
    } else {
        // eigenvalue (-1)^k
        IntPolynomial::new(vec![-sign(k % 2 == 1), BigInt::from(1)])
    };
    for i in 1..=k {
        let m = if n.is_multiple_of(2) { 2 * i - 1 } else { 2 * i } as u64;
        let s = sign((k + i) % 2 == 1);
        let quadratic = IntPolynomial::new(vec![sign(m % 2 == 1), -(s * middle(m)), BigInt::from(1)]);
        poly = poly.mul(&quadratic);
    }
    poly
}

/// Characteristic polynomial implied by the conjectured eigenvalues:
/// `prod_{i=1}^{k} (x^2 - (-1)^(k+i) L_{2i-1} x - 1)` for `n = 2k`, and
/// `(x - (-1)^k) prod_{i=1}^{k} (x^2 - (-1)^(k+i) L_{2i} x + 1)` for
/// `n = 2k + 1`.
pub fn conjectured_charpoly(n: usize) -> IntPolynomial {
    conjectured_charpoly_with(n, lucas)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub parity: Parity,
    #[serde(serialize_with = "serialize_poly")]
    pub computed_charpoly: IntPolynomial,
    #[serde(serialize_with = "serialize_poly")]
    pub conjectured_charpoly: IntPolynomial,
    pub verdict: Verdict,
    pub first_mismatch_degree: Option<usize>,
}

fn serialize_poly<S: serde::Serializer>(p: &IntPolynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    decimal::vec::serialize(p.coeffs(), s)
}

/// Compares `charpoly(R_n)` with [`conjectured_charpoly`], exactly.
pub fn check_eigen_conjecture(n: usize) -> Result<ConjectureReport> {
    let computed = build_right(n)?.charpoly();
    Ok(compare(n, computed, conjectured_charpoly(n)))
}

pub fn compare(n: usize, computed: IntPolynomial, conjectured: IntPolynomial) -> ConjectureReport {
    let first_mismatch_degree = computed.first_difference(&conjectured);
    ConjectureReport {
        n,
        parity: if n.is_multiple_of(2) { Parity::Even } else { Parity::Odd },
        computed_charpoly: computed,
        conjectured_charpoly: conjectured,
        verdict: Verdict::from_bool(first_mismatch_degree.is_none()),
        first_mismatch_degree,
    }
}
