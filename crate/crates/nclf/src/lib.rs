//! Exact L-functions of locally constant sheaves on varieties over finite
//! fields, computed as classes in K₁ of truncated power-series rings
//! Λ[T]/(T^m) over finite (possibly noncommutative) coefficient rings.
//!
//! The crate is organized bottom-up:
//!
//! - [`ff`]: finite fields F_q and their extension towers
//! - [`ring`]: finite coefficient rings Λ (Z/m, group rings, products),
//!   units, Jacobson radicals, ring homomorphisms
//! - [`series`]: truncated power series Λ[T]/(T^m) and series matrices
//! - [`k1`]: K₁ classes of finite semilocal rings, elimination certificates,
//!   Vaserstein closures, layered equality verdicts
//! - [`variety`]: affine charts over F_q, exact point counting, closed
//!   points as Frobenius orbits
//! - [`sheaf`]: Galois coverings (Kummer and explicit-table), representations
//! - [`lfun`]: Euler factors, L-functions, global sides, the trace-formula
//!   verifier, and rational zeta reconstruction
//! - [`codec`]: JSON models for schemes, sheaves, jobs, and reports
//!
//! Point counting and Euler-factor evaluation run data-parallel under the
//! `parallel` feature (enabled by default); sequential fallbacks are always
//! compiled and exposed for benchmarking.

// index-heavy modular arithmetic reads clearer with explicit loops
#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod codec;
pub mod error;
pub mod ff;
pub mod k1;
pub mod lfun;
pub mod matrix;
pub(crate) mod par;
pub mod ring;
pub mod series;
pub mod sheaf;
pub mod variety;

pub use error::{Error, Result};

/// Cap the number of worker threads used by parallel enumeration.
///
/// No-op when the `parallel` feature is disabled or a pool already exists.
pub fn configure_threads(n: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
}
