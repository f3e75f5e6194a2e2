use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntPolynomial, ModMatrix};
use crate::error::{Error, Result};

/// Dense square matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    n: usize,
    // row-major, 0-based internally
    data: Vec<BigInt>,
}

impl ExactMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(n: usize, entries: Vec<BigInt>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if entries.len() != n * n {
            return Err(Error::BadShape {
                n,
                expected: n * n,
                got: entries.len(),
            });
        }
        Ok(ExactMatrix { n, data: entries })
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::BadShape {
                    n,
                    expected: n * n,
                    got: rows.iter().map(Vec::len).sum(),
                });
            }
            data.extend(row.iter().cloned().map(Into::into));
        }
        Self::new(n, data)
    }

    /// Builds a matrix from a 1-based entry function `f(i, j)`.
    pub fn from_fn<F>(n: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> BigInt,
    {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                data.push(f(i, j));
            }
        }
        Ok(ExactMatrix { n, data })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::from_fn(n, |_, _| BigInt::zero())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry at row `i`, column `j` (1-based). Panics when out of range.
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        assert!(
            (1..=self.n).contains(&i) && (1..=self.n).contains(&j),
            "index ({i}, {j}) out of range for dimension {}",
            self.n
        );
        &self.data[(i - 1) * self.n + (j - 1)]
    }

    pub fn try_get(&self, i: usize, j: usize) -> Result<&BigInt> {
        if (1..=self.n).contains(&i) && (1..=self.n).contains(&j) {
            Ok(&self.data[(i - 1) * self.n + (j - 1)])
        } else {
            Err(Error::IndexOutOfRange { i, j, n: self.n })
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j));
        self.data[(i - 1) * self.n + (j - 1)] = value;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.data.chunks(self.n)
    }

    pub fn is_identity(&self) -> bool {
        self.data.iter().enumerate().all(|(idx, v)| {
            if idx / self.n == idx % self.n {
                v.is_one()
            } else {
                v.is_zero()
            }
        })
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|k| &self.data[k * self.n + k]).sum()
    }

    /// Same matrix with column order reversed.
    pub fn reverse_columns(&self) -> Self {
        let n = self.n;
        let data = (0..n * n)
            .map(|idx| self.data[(idx / n) * n + (n - 1 - idx % n)].clone())
            .collect();
        ExactMatrix { n, data }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        ExactMatrix {
            n: self.n,
            data: self.data.iter().map(|v| v * k).collect(),
        }
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<Self> {
        self.check_dim(other)?;
        Ok(ExactMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    fn check_dim(&self, other: &ExactMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &ExactMatrix) -> Self {
        let n = self.n;
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            let row = &mut data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for (j, cell) in row.iter_mut().enumerate() {
                    let b = &other.data[k * n + j];
                    if !b.is_zero() {
                        *cell += a * b;
                    }
                }
            }
        }
        ExactMatrix { n, data }
    }

    /// `self^e` by binary exponentiation. Negative exponents power the
    /// unimodular inverse.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 {
            self.unimodular_inverse()?
        } else {
            self.clone()
        };
        Ok(base.pow_unsigned(e.unsigned_abs()))
    }

    fn pow_unsigned(&self, mut e: u64) -> Self {
        let mut acc: Option<ExactMatrix> = None;
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul_unchecked(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc.unwrap_or_else(|| ExactMatrix::identity(self.n).expect("n >= 1"))
    }

    /// Entrywise reduction into `[0, p)`.
    pub fn to_mod(&self, p: u64) -> Result<ModMatrix> {
        ModMatrix::validate_modulus(p)?;
        let m = BigInt::from(p);
        let entries = self
            .data
            .iter()
            .map(|v| {
                let r = v.mod_floor(&m);
                u64::try_from(&r).expect("residue below a u64 modulus")
            })
            .collect();
        ModMatrix::new(self.n, p, entries)
    }

    /// Determinant via Bareiss fraction-free elimination.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        let mut a = self.data.clone();
        let mut sign = false;
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k * n + k].is_zero() {
                match (k + 1..n).find(|&r| !a[r * n + k].is_zero()) {
                    Some(r) => {
                        for c in 0..n {
                            a.swap(k * n + c, r * n + c);
                        }
                        sign = !sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[k * n + k] * &a[i * n + j] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = a[k * n + k].clone();
        }
        if sign {
            -prev
        } else {
            prev
        }
    }

    /// Monic characteristic polynomial `det(xI - A)` by Faddeev-LeVerrier.
    ///
    /// Every division by `k` in the trace recurrence is exact over the
    /// integers; the division is checked anyway.
    pub fn charpoly(&self) -> IntPolynomial {
        let n = self.n;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        // m holds M_k with A M_{k} used for the next coefficient
        let mut m = ExactMatrix::zero(n).expect("n >= 1");
        for k in 1..=n {
            let mut next = self.mul_unchecked(&m);
            for d in 0..n {
                next.data[d * n + d] += &coeffs[n - k + 1];
            }
            m = next;
            let am = self.mul_unchecked(&m);
            let (q, r) = am.trace().div_rem(&BigInt::from(k));
            debug_assert!(r.is_zero(), "Faddeev-LeVerrier division must be exact");
            coeffs[n - k] = -q;
        }
        IntPolynomial::new(coeffs)
    }

    /// Integer inverse of a matrix with determinant +-1.
    ///
    /// Fraction-free Gauss-Jordan on `[A | I]` leaves `[d I | adj]` with
    /// `d = +-det A`; the adjugate block is then divided by `d` exactly.
    pub fn unimodular_inverse(&self) -> Result<Self> {
        let (d, adj) = self.scaled_inverse();
        if d.abs() != BigInt::one() {
            return Err(Error::NotUnimodular { det: d.to_string() });
        }
        Ok(if d.is_one() { adj } else { adj.scale(&d) })
    }

    /// Returns `(d, X)` with `A X = d I`. `d` is zero for singular input.
    fn scaled_inverse(&self) -> (BigInt, ExactMatrix) {
        let n = self.n;
        let w = 2 * n;
        let mut a = vec![BigInt::zero(); n * w];
        for i in 0..n {
            for j in 0..n {
                a[i * w + j] = self.data[i * n + j].clone();
            }
            a[i * w + n + i] = BigInt::one();
        }
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k * w + k].is_zero() {
                match (k + 1..n).find(|&r| !a[r * w + k].is_zero()) {
                    Some(r) => {
                        for c in 0..w {
                            a.swap(k * w + c, r * w + c);
                        }
                    }
                    None => {
                        return (BigInt::zero(), ExactMatrix::zero(n).expect("n >= 1"));
                    }
                }
            }
            let pivot = a[k * w + k].clone();
            for i in (0..n).filter(|&i| i != k) {
                let factor = a[i * w + k].clone();
                for j in 0..w {
                    if j == k {
                        continue;
                    }
                    let v = &pivot * &a[i * w + j] - &factor * &a[k * w + j];
                    a[i * w + j] = v / &prev;
                }
                a[i * w + k] = BigInt::zero();
            }
            prev = pivot;
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            data.extend_from_slice(&a[i * w + n..(i + 1) * w]);
        }
        (prev, ExactMatrix { n, data })
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (r, row) in self.rows().enumerate() {
            if r > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (c, v) in row.iter().enumerate() {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactMatrix({}x{}, {self})", self.n, self.n)
    }
}
