use std::fmt;

use super::primes::{is_prime, pow_mod};
use crate::error::{Error, Result};

/// Dense square matrix of residues modulo a machine-word prime.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    n: usize,
    p: u64,
    data: Vec<u64>,
}

impl ModMatrix {
    pub(crate) fn validate_modulus(p: u64) -> Result<()> {
        if p < 2 {
            return Err(Error::BadModulus(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(())
    }

    /// Row-major residues; entries are reduced mod `p` on the way in.
    pub fn new(n: usize, p: u64, entries: Vec<u64>) -> Result<Self> {
        Self::validate_modulus(p)?;
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
        let data = entries.into_iter().map(|v| v % p).collect();
        Ok(ModMatrix { n, p, data })
    }

    pub fn identity(n: usize, p: u64) -> Result<Self> {
        Self::scalar(n, p, 1)
    }

    pub fn scalar(n: usize, p: u64, s: u64) -> Result<Self> {
        let mut entries = vec![0; n * n];
        for k in 0..n {
            entries[k * n + k] = s;
        }
        Self::new(n, p, entries)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    /// 1-based entry access.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j));
        self.data[(i - 1) * self.n + (j - 1)]
    }

    pub fn is_identity(&self) -> bool {
        self.as_scalar() == Some(1)
    }

    /// `Some(s)` when the matrix is `s * I`.
    pub fn as_scalar(&self) -> Option<u64> {
        let n = self.n;
        let s = self.data[0];
        self.data
            .iter()
            .enumerate()
            .all(|(idx, &v)| if idx / n == idx % n { v == s } else { v == 0 })
            .then_some(s)
    }

    pub fn mul(&self, other: &ModMatrix) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch {
                left: self.p,
                right: other.p,
            });
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &ModMatrix) -> Self {
        let n = self.n;
        let p = self.p as u128;
        let mut data = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc: u128 = 0;
                for k in 0..n {
                    acc += self.data[i * n + k] as u128 * other.data[k * n + j] as u128;
                    // keep headroom for the next product
                    if acc >= 1 << 126 {
                        acc %= p;
                    }
                }
                data[i * n + j] = (acc % p) as u64;
            }
        }
        ModMatrix { n, p: self.p, data }
    }

    /// `self^e` by binary exponentiation.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = ModMatrix::identity(self.n, self.p).expect("valid shape");
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Determinant in GF(p) by Gaussian elimination.
    pub fn det(&self) -> u64 {
        let n = self.n;
        let p = self.p;
        let mut a = self.data.clone();
        let mut det = 1u64;
        for k in 0..n {
            let Some(r) = (k..n).find(|&r| a[r * n + k] != 0) else {
                return 0;
            };
            if r != k {
                for c in 0..n {
                    a.swap(k * n + c, r * n + c);
                }
                det = (p - det) % p;
            }
            let pivot = a[k * n + k];
            det = mul(det, pivot, p);
            let inv = pow_mod(pivot, p - 2, p);
            for i in k + 1..n {
                let f = mul(a[i * n + k], inv, p);
                if f == 0 {
                    continue;
                }
                for c in k..n {
                    let sub = mul(f, a[k * n + c], p);
                    a[i * n + c] = (a[i * n + c] + p - sub) % p;
                }
            }
        }
        det
    }
}

fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl fmt::Display for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (r, row) in self.data.chunks(self.n).enumerate() {
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

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModMatrix({}x{} mod {}, {self})", self.n, self.n, self.p)
    }
}
