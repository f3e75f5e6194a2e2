//! Exact arithmetic for left- and column-justified Pascal matrices.
//!
//! `L_n` has entries `C(i-1, j-1)` and `R_n` has entries `C(i-1, n-j)`.
//! This crate builds both, raises them to exact integer powers, reduces
//! them modulo primes, and checks the closed forms, recurrences and
//! modular-order congruences they satisfy. Powers of `R_n` are tied to
//! the Fibonacci numbers; see [`laws`] and [`modorder`].

pub mod campaign;
pub mod cli;
pub mod error;
pub mod fib;
pub mod laws;
pub mod matrix;
pub mod modorder;
pub mod pascal;
pub mod report;
pub mod spectra;

pub use error::{Error, Result};
pub use matrix::{ExactMatrix, IntPolynomial, ModMatrix};
pub use pascal::PascalKind;
pub use report::Verdict;
