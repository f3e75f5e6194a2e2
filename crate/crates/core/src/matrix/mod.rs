//! Dense exact linear algebra over the integers and over prime fields.
//!
//! All public indexing is 1-based: `get(i, j)` addresses row `i`, column
//! `j`, with `1 <= i, j <= n`.

mod exact;
mod modular;
mod poly;
pub mod primes;

pub use exact::ExactMatrix;
pub use modular::ModMatrix;
pub use poly::IntPolynomial;
