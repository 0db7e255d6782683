//! Exact divisor-class computations for conformal-block bundles on the
//! moduli space of stable n-pointed genus-0 curves.
//!
//! Everything runs over arbitrary-precision rationals: root systems and
//! normalized invariant forms for the classical families, tensor-product
//! and fusion coefficients, n-point block ranks by factorization, psi
//! classes and boundary divisors on the moduli space, branching data for
//! conformal embeddings, and the divisor identity relating block bundles
//! across such an embedding.
//!
//! The `cbdiv` binary exposes the same operations for batch use; see the
//! [`cli`] module and the repository README.

pub mod chern;
pub mod cli;
pub mod duality;
pub mod embedding;
mod error;
pub mod fusionrank;
pub mod liealg;
pub mod linalg;
pub mod picm0n;
pub mod rational;

pub use error::{Error, Result};
