//! Cell-by-cell verifiers for the recurrences and closed forms governing
//! powers of `L_n` and `R_n`.
//!
//! Every verifier recomputes its power through [`ExactMatrix::pow`] and
//! compares exactly over the integers. Failures carry the offending cell.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fib::{fib, fib_signed};
use crate::matrix::ExactMatrix;
use crate::pascal::{binomial, build_left, build_right, left_power_entry};
use crate::report::decimal;

pub const LEFT_CLOSED_FORM: &str = "left-closed-form";
pub const SQUARE_RECURRENCE: &str = "square-recurrence";
pub const CUBE_RECURRENCE: &str = "cube-recurrence";
pub const FIB_RECURRENCE: &str = "fib-recurrence";
pub const BORDER_FORMULAS: &str = "border";
pub const SQUARE_ROW_EXPANSION: &str = "square-row-expansion";
pub const CUBE_ROW_EXPANSION: &str = "cube-row-expansion";
pub const ROW_PROPAGATION: &str = "row-propagation";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellWitness {
    pub i: usize,
    pub j: usize,
    #[serde(with = "decimal")]
    pub lhs: BigInt,
    #[serde(with = "decimal")]
    pub rhs: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellLawReport {
    pub law: &'static str,
    pub n: usize,
    pub e: i64,
    pub checked_cells: usize,
    pub failures: Vec<CellWitness>,
}

impl CellLawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_cells<I, F>(law: &'static str, n: usize, e: i64, cells: I, mut sides: F) -> CellLawReport
where
    I: IntoIterator<Item = (usize, usize)>,
    F: FnMut(usize, usize) -> (BigInt, BigInt),
{
    let mut checked_cells = 0;
    let mut failures = Vec::new();
    for (i, j) in cells {
        checked_cells += 1;
        let (lhs, rhs) = sides(i, j);
        if lhs != rhs {
            failures.push(CellWitness { i, j, lhs, rhs });
        }
    }
    CellLawReport {
        law,
        n,
        e,
        checked_cells,
        failures,
    }
}

fn grid(rows: std::ops::RangeInclusive<usize>, cols: std::ops::RangeInclusive<usize>)
    -> impl Iterator<Item = (usize, usize)> {
    rows.flat_map(move |i| cols.clone().map(move |j| (i, j)))
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(msg.to_owned()))
    }
}

fn right_power(n: usize, e: i64) -> Result<ExactMatrix> {
    build_right(n)?.pow(e)
}

/// Compares every entry of `m` against `closed_form(i, j)`.
pub fn check_closed_form<F>(law: &'static str, m: &ExactMatrix, e: i64, closed_form: F) -> CellLawReport
where
    F: Fn(usize, usize) -> BigInt,
{
    let n = m.dim();
    check_cells(law, n, e, grid(1..=n, 1..=n), |i, j| {
        (m.get(i, j).clone(), closed_form(i, j))
    })
}

/// `L_n^e` entries against `e^(i-j) C(i-1, j-1)`; negative `e` goes through
/// the unimodular inverse.
pub fn verify_left_closed_form(n: usize, e: i64) -> Result<CellLawReport> {
    let power = build_left(n)?.pow(e)?;
    Ok(check_closed_form(LEFT_CLOSED_FORM, &power, e, |i, j| {
        left_power_entry(e, i, j)
    }))
}

/// Coefficients of `delta a[i,j] = alpha a[i-1,j] + beta a[i-1,j-1] + gamma a[i,j-1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalRelation {
    pub delta: BigInt,
    pub alpha: BigInt,
    pub beta: BigInt,
    pub gamma: BigInt,
}

impl LocalRelation {
    pub fn from_i64(delta: i64, alpha: i64, beta: i64, gamma: i64) -> Self {
        LocalRelation {
            delta: delta.into(),
            alpha: alpha.into(),
            beta: beta.into(),
            gamma: gamma.into(),
        }
    }

    /// `(F_{e-1}, F_e, F_{e+1}, -F_e)`.
    pub fn fibonacci(e: i64) -> Self {
        LocalRelation {
            delta: fib_signed(e - 1),
            alpha: fib_signed(e),
            beta: fib_signed(e + 1),
            gamma: -fib_signed(e),
        }
    }

    /// Iterates `delta' = alpha, alpha' = alpha + delta, beta' = beta - gamma,
    /// gamma' = -beta` from the `R^1` tuple `(0, 1, 1, -1)`.
    pub fn from_system(e: u64) -> Self {
        assert!(e >= 1, "the coefficient system starts at e = 1");
        let mut rel = LocalRelation::from_i64(0, 1, 1, -1);
        for _ in 1..e {
            rel = LocalRelation {
                delta: rel.alpha.clone(),
                alpha: &rel.alpha + &rel.delta,
                beta: &rel.beta - &rel.gamma,
                gamma: -rel.beta,
            };
        }
        rel
    }

    fn sides(&self, a: &ExactMatrix, i: usize, j: usize) -> (BigInt, BigInt) {
        let lhs = &self.delta * a.get(i, j);
        let rhs = &self.alpha * a.get(i - 1, j)
            + &self.beta * a.get(i - 1, j - 1)
            + &self.gamma * a.get(i, j - 1);
        (lhs, rhs)
    }
}

/// Checks a [`LocalRelation`] on `a` over `2 <= i, j <= n`.
pub fn check_local_relation(law: &'static str, a: &ExactMatrix, e: i64, rel: &LocalRelation) -> CellLawReport {
    let n = a.dim();
    check_cells(law, n, e, grid(2..=n, 2..=n), |i, j| rel.sides(a, i, j))
}

/// `b[i,j+1] = b[i-1,j+1] + 2 b[i-1,j] - b[i,j]` for `B = R_n^2`,
/// `2 <= i <= n`, `1 <= j <= n-1`. Witnesses use these `(i, j)`.
pub fn verify_square_recurrence(n: usize) -> Result<CellLawReport> {
    require(n >= 2, "square recurrence needs n >= 2")?;
    let b = right_power(n, 2)?;
    Ok(check_cells(SQUARE_RECURRENCE, n, 2, grid(2..=n, 1..=n - 1), |i, j| {
        let lhs = b.get(i, j + 1).clone();
        let rhs = b.get(i - 1, j + 1) + b.get(i - 1, j) * 2 - b.get(i, j);
        (lhs, rhs)
    }))
}

/// `c[i+1,j] = 2 c[i,j] + 3 c[i,j-1] - 2 c[i+1,j-1]` for `C = R_n^3`,
/// `1 <= i <= n-1`, `2 <= j <= n`.
pub fn verify_cube_recurrence(n: usize) -> Result<CellLawReport> {
    require(n >= 2, "cube recurrence needs n >= 2")?;
    let c = right_power(n, 3)?;
    Ok(check_cells(CUBE_RECURRENCE, n, 3, grid(1..=n - 1, 2..=n), |i, j| {
        let lhs = c.get(i + 1, j).clone();
        let rhs = c.get(i, j) * 2 + c.get(i, j - 1) * 3 - c.get(i + 1, j - 1) * 2;
        (lhs, rhs)
    }))
}

/// `F_{e-1} a[i,j] = F_e a[i-1,j] + F_{e+1} a[i-1,j-1] - F_e a[i,j-1]` for
/// `A = R_n^e`, `2 <= i, j <= n`.
pub fn verify_fib_recurrence(n: usize, e: i64) -> Result<CellLawReport> {
    require(n >= 2, "Fibonacci recurrence needs n >= 2")?;
    require(e >= 1, "Fibonacci recurrence needs e >= 1")?;
    let a = right_power(n, e)?;
    Ok(check_local_relation(FIB_RECURRENCE, &a, e, &LocalRelation::fibonacci(e)))
}

/// `a[1,j] = C(n-1, j-1) F_{e-1}^(n-j) F_e^(j-1)` for `R_n^e`.
pub fn border_first_row(n: usize, e: u64, j: usize) -> BigInt {
    binomial(n - 1, j as i64 - 1) * fib(e - 1).pow((n - j) as u32) * fib(e).pow((j - 1) as u32)
}

/// `a[i,1] = F_{e-1}^(n-i) F_e^(i-1)` for `R_n^e`.
pub fn border_first_col(n: usize, e: u64, i: usize) -> BigInt {
    fib(e - 1).pow((n - i) as u32) * fib(e).pow((i - 1) as u32)
}

/// First row and first column of `a` against the given closed forms.
/// Cell `(1, 1)` is checked once, against the row formula.
pub fn check_border<R, C>(a: &ExactMatrix, e: i64, row: R, col: C) -> CellLawReport
where
    R: Fn(usize) -> BigInt,
    C: Fn(usize) -> BigInt,
{
    let n = a.dim();
    let cells = (1..=n).map(|j| (1, j)).chain((2..=n).map(|i| (i, 1)));
    check_cells(BORDER_FORMULAS, n, e, cells, |i, j| {
        let expected = if i == 1 { row(j) } else { col(i) };
        (a.get(i, j).clone(), expected)
    })
}

/// First row and column of `R_n^e` against the Fibonacci closed forms
/// (with `0^0 = 1`).
pub fn verify_border_formulas(n: usize, e: i64) -> Result<CellLawReport> {
    require(n >= 1, "n must be at least 1")?;
    require(e >= 1, "border formulas need e >= 1")?;
    let a = right_power(n, e)?;
    let eu = e as u64;
    Ok(check_border(
        &a,
        e,
        |j| border_first_row(n, eu, j),
        |i| border_first_col(n, eu, i),
    ))
}

fn row_cells(n: usize) -> impl Iterator<Item = (usize, usize)> {
    grid(1..=n - 1, 1..=n)
}

/// `b[i+1,j] = b[i,j] - sum_{k=1}^{j-1} (-1)^k b[i,j-k]` for `B = R_n^2`,
/// over `1 <= i <= n-1`, `1 <= j <= n`.
pub fn verify_square_row_expansion(n: usize) -> Result<CellLawReport> {
    require(n >= 2, "row expansion needs n >= 2")?;
    let b = right_power(n, 2)?;
    Ok(check_cells(SQUARE_ROW_EXPANSION, n, 2, row_cells(n), |i, j| {
        let mut rhs = b.get(i, j).clone();
        for k in 1..j {
            if k % 2 == 1 {
                rhs += b.get(i, j - k);
            } else {
                rhs -= b.get(i, j - k);
            }
        }
        (b.get(i + 1, j).clone(), rhs)
    }))
}

/// `c[i+1,j] = 2 c[i,j] + sum_{k=1}^{j-1} (-1)^k 2^(k-1) c[i,j-k]` for
/// `C = R_n^3`, over `1 <= i <= n-1`, `1 <= j <= n`.
pub fn verify_cube_row_expansion(n: usize) -> Result<CellLawReport> {
    require(n >= 2, "row expansion needs n >= 2")?;
    let c = right_power(n, 3)?;
    Ok(check_cells(CUBE_ROW_EXPANSION, n, 3, row_cells(n), |i, j| {
        let mut rhs = c.get(i, j) * 2;
        for k in 1..j {
            let term = c.get(i, j - k) << (k - 1);
            if k % 2 == 1 {
                rhs -= term;
            } else {
                rhs += term;
            }
        }
        (c.get(i + 1, j).clone(), rhs)
    }))
}

pub fn verify_row_expansion_23(n: usize) -> Result<[CellLawReport; 2]> {
    Ok([verify_square_row_expansion(n)?, verify_cube_row_expansion(n)?])
}

/// Denominator-cleared row propagation on `a` with `(F_{e-1}, F_e)` given
/// as `f_prev`, `f_cur`:
///
/// `f_prev^j a[i+1,j] = f_cur f_prev^(j-1) a[i,j]
///     - sum_{k=1}^{j-1} (-1)^(k+e) f_cur^(k-1) f_prev^(j-1-k) a[i,j-k]`
pub fn check_row_propagation(a: &ExactMatrix, e: i64, f_prev: &BigInt, f_cur: &BigInt) -> CellLawReport {
    let n = a.dim();
    check_cells(ROW_PROPAGATION, n, e, row_cells(n), |i, j| {
        let lhs = f_prev.pow(j as u32) * a.get(i + 1, j);
        let mut rhs = f_cur * f_prev.pow((j - 1) as u32) * a.get(i, j);
        for k in 1..j {
            let term = f_cur.pow((k - 1) as u32) * f_prev.pow((j - 1 - k) as u32) * a.get(i, j - k);
            if (k as i64 + e) % 2 == 0 {
                rhs -= term;
            } else {
                rhs += term;
            }
        }
        (lhs, rhs)
    })
}

pub fn verify_row_propagation(n: usize, e: i64) -> Result<CellLawReport> {
    require(n >= 2, "row propagation needs n >= 2")?;
    require(e >= 2, "row propagation needs e >= 2 (F_{e-1} vanishes at e = 1)")?;
    let a = right_power(n, e)?;
    Ok(check_row_propagation(&a, e, &fib_signed(e - 1), &fib_signed(e)))
}

/// True when `rel` is exactly `(F_{e-1}, F_e, F_{e+1}, -F_e)`.
pub fn coefficient_system_matches_fibonacci(e: u64) -> bool {
    LocalRelation::from_system(e) == LocalRelation::fibonacci(e as i64)
}
