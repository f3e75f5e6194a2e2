//! Left-justified (`L_n`) and column-justified (`R_n`) Pascal matrices.
//!
//! `L_n` has entry `C(i-1, j-1)`; `R_n` has entry `C(i-1, n-j)`, which is
//! `L_n` with its columns reversed. Both are unimodular.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;

/// Which of the two Pascal matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PascalKind {
    Left,
    Right,
}

impl PascalKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PascalKind::Left => "left",
            PascalKind::Right => "right",
        }
    }

    pub fn build(self, n: usize) -> Result<ExactMatrix> {
        match self {
            PascalKind::Left => build_left(n),
            PascalKind::Right => build_right(n),
        }
    }
}

impl std::str::FromStr for PascalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" | "L" => Ok(PascalKind::Left),
            "right" | "R" => Ok(PascalKind::Right),
            other => Err(Error::Parse(format!("unknown matrix kind `{other}`"))),
        }
    }
}

/// Pascal triangle grown one row at a time.
///
/// Growth happens under a write lock; readers never observe a partial row.
#[derive(Debug, Default)]
pub struct BinomialCache {
    rows: RwLock<Vec<Vec<BigInt>>>,
}

impl BinomialCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide cache used by the free functions in this module.
    pub fn global() -> &'static BinomialCache {
        static CACHE: OnceLock<BinomialCache> = OnceLock::new();
        CACHE.get_or_init(BinomialCache::new)
    }

    /// `C(a, b)`, or zero when `b` lies outside `[0, a]`.
    pub fn get(&self, a: usize, b: i64) -> BigInt {
        if b < 0 || b as u64 > a as u64 {
            return BigInt::zero();
        }
        let b = b as usize;
        {
            let rows = self.rows.read().expect("binomial cache poisoned");
            if let Some(row) = rows.get(a) {
                return row[b].clone();
            }
        }
        let mut rows = self.rows.write().expect("binomial cache poisoned");
        while rows.len() <= a {
            let next = match rows.last() {
                None => vec![BigInt::one()],
                Some(prev) => {
                    let mut row = Vec::with_capacity(prev.len() + 1);
                    row.push(BigInt::one());
                    row.extend(prev.windows(2).map(|w| &w[0] + &w[1]));
                    row.push(BigInt::one());
                    row
                }
            };
            rows.push(next);
        }
        rows[a][b].clone()
    }

    pub fn rows_cached(&self) -> usize {
        self.rows.read().expect("binomial cache poisoned").len()
    }
}

/// `C(a, b)` with the out-of-triangle convention `C(a, b) = 0`.
pub fn binomial(a: usize, b: i64) -> BigInt {
    BinomialCache::global().get(a, b)
}

/// `L_n`, entry `(i, j)` = `C(i-1, j-1)`.
pub fn build_left(n: usize) -> Result<ExactMatrix> {
    ExactMatrix::from_fn(n, |i, j| binomial(i - 1, j as i64 - 1))
}

/// `R_n`, entry `(i, j)` = `C(i-1, n-j)`.
pub fn build_right(n: usize) -> Result<ExactMatrix> {
    let r = ExactMatrix::from_fn(n, |i, j| binomial(i - 1, (n - j) as i64))?;
    debug_assert_eq!(r, build_left(n)?.reverse_columns());
    Ok(r)
}

/// Entry `(i, j)` of `L_n^e`: `e^(i-j) C(i-1, j-1)`, zero above the diagonal.
///
/// Valid for every integer `e`, including `e = 0` under `0^0 = 1`.
pub fn left_power_entry(e: i64, i: usize, j: usize) -> BigInt {
    if j > i || j == 0 {
        return BigInt::zero();
    }
    BigInt::from(e).pow((i - j) as u32) * binomial(i - 1, j as i64 - 1)
}

/// `L_n^e` built directly from [`left_power_entry`].
pub fn left_power(n: usize, e: i64) -> Result<ExactMatrix> {
    ExactMatrix::from_fn(n, |i, j| left_power_entry(e, i, j))
}

fn signed(odd: bool, v: BigInt) -> BigInt {
    if odd {
        -v
    } else {
        v
    }
}

/// `L_n^{-1}`, entry `(-1)^(i+j) C(i-1, j-1)`.
pub fn left_inverse(n: usize) -> Result<ExactMatrix> {
    ExactMatrix::from_fn(n, |i, j| signed((i + j) % 2 == 1, binomial(i - 1, j as i64 - 1)))
}

/// `R_n^{-1}`, entry `(-1)^(n+i+j+1) C(n-i, j-1)`.
pub fn right_inverse(n: usize) -> Result<ExactMatrix> {
    ExactMatrix::from_fn(n, |i, j| {
        signed((n + i + j + 1) % 2 == 1, binomial(n - i, j as i64 - 1))
    })
}
