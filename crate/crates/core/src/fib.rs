//! Fibonacci and Lucas numbers, entry points, Pisano periods and the
//! classical identities the modular-order results lean on.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::primes::is_prime;
use crate::pascal::binomial;
use crate::report::Verdict;

/// `(F_k, F_{k+1})` by fast doubling.
fn fib_pair(k: u64) -> (BigInt, BigInt) {
    if k == 0 {
        return (BigInt::zero(), BigInt::one());
    }
    let (a, b) = fib_pair(k / 2);
    // F_2m = F_m (2 F_{m+1} - F_m), F_2m+1 = F_m^2 + F_{m+1}^2
    let c = &a * (&b * 2 - &a);
    let d = &a * &a + &b * &b;
    if k.is_multiple_of(2) {
        (c, d)
    } else {
        let next = &c + &d;
        (d, next)
    }
}

/// Residues `(F_k mod m, F_{k+1} mod m)` by fast doubling.
pub fn fib_pair_mod(k: u64, m: u64) -> (u64, u64) {
    assert!(m >= 1, "modulus must be positive");
    let mm = m as u128;
    let mut a: u128 = 0;
    let mut b: u128 = 1 % mm;
    for bit in (0..64 - k.leading_zeros()).rev() {
        let c = a * ((2 * b + mm - a) % mm) % mm;
        let d = (a * a + b * b) % mm;
        if (k >> bit) & 1 == 0 {
            a = c;
            b = d;
        } else {
            a = d;
            b = (c + d) % mm;
        }
    }
    (a as u64, b as u64)
}

/// Residue class of a prime modulo 5, with `{2, 3}` treated as one class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResidueClass {
    /// p = +-1 (mod 5)
    PlusMinusOne,
    /// p = +-2 = -+3 (mod 5)
    PlusMinusTwo,
    /// p = 5
    Zero,
}

impl ResidueClass {
    pub fn of(p: u64) -> Self {
        match p % 5 {
            1 | 4 => ResidueClass::PlusMinusOne,
            2 | 3 => ResidueClass::PlusMinusTwo,
            _ => ResidueClass::Zero,
        }
    }
}

/// Per-modulus Fibonacci data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FibModData {
    pub modulus: u64,
    pub entry_point: u64,
    pub pisano_period: u64,
}

impl FibModData {
    /// Forward iteration, stopped hard at the `6m` period bound.
    pub fn compute(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::BadModulus(m));
        }
        let limit = 6 * m;
        let (mut a, mut b) = (0u64, 1u64);
        let mut entry_point = None;
        for k in 1..=limit {
            let next = ((a as u128 + b as u128) % m as u128) as u64;
            a = b;
            b = next;
            // (a, b) = (F_k, F_{k+1})
            if a == 0 {
                entry_point.get_or_insert(k);
                if b == 1 {
                    return Ok(FibModData {
                        modulus: m,
                        entry_point: entry_point.expect("set above"),
                        pisano_period: k,
                    });
                }
            }
        }
        Err(Error::Precondition(format!(
            "Fibonacci period modulo {m} exceeds 6m"
        )))
    }
}

/// Memoized Fibonacci values and per-modulus data.
///
/// Both tables are insert-only; concurrent callers may race to compute the
/// same entry but always store identical values.
#[derive(Debug, Default)]
pub struct FibTable {
    values: RwLock<Vec<BigInt>>,
    moduli: RwLock<HashMap<u64, FibModData>>,
}

const MEMO_LIMIT: u64 = 4096;

impl FibTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn global() -> &'static FibTable {
        static TABLE: OnceLock<FibTable> = OnceLock::new();
        TABLE.get_or_init(FibTable::new)
    }

    pub fn fib(&self, k: u64) -> BigInt {
        if k >= MEMO_LIMIT {
            return fib_pair(k).0;
        }
        let k = k as usize;
        if let Some(v) = self.values.read().expect("fib table poisoned").get(k) {
            return v.clone();
        }
        let mut values = self.values.write().expect("fib table poisoned");
        if values.is_empty() {
            values.push(BigInt::zero());
            values.push(BigInt::one());
        }
        while values.len() <= k {
            let len = values.len();
            let next = &values[len - 1] + &values[len - 2];
            values.push(next);
        }
        values[k].clone()
    }

    pub fn mod_data(&self, m: u64) -> Result<FibModData> {
        if let Some(d) = self.moduli.read().expect("fib table poisoned").get(&m) {
            return Ok(*d);
        }
        let d = FibModData::compute(m)?;
        self.moduli.write().expect("fib table poisoned").insert(m, d);
        Ok(d)
    }
}

/// `F_k` with `F_0 = 0`, `F_1 = 1`.
pub fn fib(k: u64) -> BigInt {
    FibTable::global().fib(k)
}

/// `F_k` for a signed index, via `F_{-k} = (-1)^(k+1) F_k`.
pub fn fib_signed(k: i64) -> BigInt {
    let v = fib(k.unsigned_abs());
    if k < 0 && k % 2 == 0 {
        -v
    } else {
        v
    }
}

/// `L_k` with `L_0 = 2`, `L_1 = 1`.
pub fn lucas(k: u64) -> BigInt {
    if k == 0 {
        return BigInt::from(2);
    }
    fib(k - 1) + fib(k + 1)
}

/// Least `k > 0` with `m | F_k`.
pub fn entry_point(m: u64) -> Result<u64> {
    Ok(FibTable::global().mod_data(m)?.entry_point)
}

/// Least `k > 0` with `(F_k, F_{k+1}) = (0, 1) mod m`.
pub fn pisano_period(m: u64) -> Result<u64> {
    Ok(FibTable::global().mod_data(m)?.pisano_period)
}

fn require_odd_prime_not_five(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 || p == 5 {
        return Err(Error::Precondition(format!(
            "prime {p} is excluded; expected an odd prime other than 5"
        )));
    }
    Ok(())
}

/// A divisibility claim `divisor | target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Divides {
    pub claim: String,
    pub divisor: u64,
    pub target: u64,
    pub holds: bool,
}

impl Divides {
    fn new(claim: &str, divisor: u64, target: u64) -> Self {
        Divides {
            claim: claim.to_owned(),
            divisor,
            target,
            holds: target.is_multiple_of(divisor),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BloomWallReport {
    pub p: u64,
    pub class: ResidueClass,
    pub entry_point: u64,
    pub pisano_period: u64,
    pub claims: Vec<Divides>,
}

impl BloomWallReport {
    pub fn holds(&self) -> bool {
        self.claims.iter().all(|c| c.holds)
    }
}

/// Period divides `p - 1` when `p = +-1 (mod 5)`; entry point divides
/// `p + 1` and period divides `2(p + 1)` when `p = +-2 (mod 5)`.
pub fn bloom_wall_check(p: u64) -> Result<BloomWallReport> {
    require_odd_prime_not_five(p)?;
    let data = FibTable::global().mod_data(p)?;
    let class = ResidueClass::of(p);
    let claims = match class {
        ResidueClass::PlusMinusOne => vec![Divides::new("period | p-1", data.pisano_period, p - 1)],
        ResidueClass::PlusMinusTwo => vec![
            Divides::new("entry point | p+1", data.entry_point, p + 1),
            Divides::new("period | 2(p+1)", data.pisano_period, 2 * (p + 1)),
        ],
        ResidueClass::Zero => unreachable!("p = 5 rejected above"),
    };
    Ok(BloomWallReport {
        p,
        class,
        entry_point: data.entry_point,
        pisano_period: data.pisano_period,
        claims,
    })
}

/// `F_j` from `2^(j-1) F_j = sum_{t odd} 5^((t-1)/2) C(j, t)`, with one
/// exact division at the end.
pub fn fib_via_binomials(j: u64) -> Result<BigInt> {
    if j == 0 {
        return Err(Error::Precondition("index must be at least 1".into()));
    }
    let mut sum = BigInt::zero();
    let mut power_of_five = BigInt::one();
    for t in (1..=j).step_by(2) {
        sum += &power_of_five * binomial(j as usize, t as i64);
        power_of_five *= 5;
    }
    let scale = BigInt::one() << (j - 1);
    let (q, r) = sum.div_rem(&scale);
    if !r.is_zero() {
        return Err(Error::Precondition(format!(
            "binomial sum for j = {j} is not divisible by 2^{}",
            j - 1
        )));
    }
    Ok(q)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub e: u64,
    /// `F_{e-1} F_{e+1} - F_e^2 = (-1)^e`
    pub cassini: bool,
    /// `F_{2e-1} = F_{e-1}^2 + F_e^2`
    pub doubling: bool,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.cassini && self.doubling
    }
}

pub fn check_identities(e: u64) -> Result<IdentityReport> {
    if e == 0 {
        return Err(Error::Precondition("e must be at least 1".into()));
    }
    let (prev, cur, next) = (fib(e - 1), fib(e), fib(e + 1));
    let sign = if e.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let cassini = &prev * &next - &cur * &cur == sign;
    let doubling = fib(2 * e - 1) == &prev * &prev + &cur * &cur;
    Ok(IdentityReport { e, cassini, doubling })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodExactnessReport {
    pub p: u64,
    pub class: ResidueClass,
    pub entry_point: u64,
    pub pisano_period: u64,
    /// The period the hypothesis predicts, if the hypothesis is met.
    pub expected_period: Option<u64>,
    pub verdict: Verdict,
}

/// If `p = +-1 (mod 5)` with entry point `p - 1` the period is exactly
/// `p - 1`; if `p = +-2 (mod 5)` with entry point `p + 1` it is exactly
/// `2(p + 1)`.
pub fn period_exactness_check(p: u64) -> Result<PeriodExactnessReport> {
    require_odd_prime_not_five(p)?;
    let data = FibTable::global().mod_data(p)?;
    let class = ResidueClass::of(p);
    let expected_period = match class {
        ResidueClass::PlusMinusOne if data.entry_point == p - 1 => Some(p - 1),
        ResidueClass::PlusMinusTwo if data.entry_point == p + 1 => Some(2 * (p + 1)),
        _ => None,
    };
    let verdict = match expected_period {
        Some(expected) => Verdict::from_bool(data.pisano_period == expected),
        None => Verdict::HypothesisNotMet,
    };
    Ok(PeriodExactnessReport {
        p,
        class,
        entry_point: data.entry_point,
        pisano_period: data.pisano_period,
        expected_period,
        verdict,
    })
}
