//! Disk dynamics of finite Blaschke products.
//!
//! A finite Blaschke product is a rational self-map of the unit disk
//!
//! ```text
//! f(z) = rho * prod_i (z - a_i) / (1 - conj(a_i) z),   |rho| = 1, |a_i| < 1.
//! ```
//!
//! This crate provides, on top of that data model:
//!
//! * numerical kernels for theta functions, elliptic moduli, Jacobi
//!   elliptic functions and the Weierstrass P-function ([`elliptic`]);
//! * Chebyshev-Blaschke products `T_{n,t}` built by descending the
//!   multiplication-by-n isogeny through the Jacobi cd function ([`cheby`]);
//! * elliptic rational functions `n_tau` by Weierstrass descent, with
//!   Gamma_0(n) equivalence witnesses ([`ellrat`]);
//! * numerical monodromy, block systems of imprimitivity and the
//!   factorization toolkit of the composition monoid ([`factor`]);
//! * exact arithmetic over Q(i) for orbits, naive and canonical heights,
//!   and orbit-intersection experiments ([`dynamics`]).
//!
//! Everything is `no_std`-compatible (alloc required); disable the default
//! `std` feature for embedded use. All values are immutable and thread-safe.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod blaschke;
pub mod cheby;
pub mod dynamics;
pub mod elliptic;
pub mod ellrat;
mod error;
pub mod factor;
pub mod mobius;
pub mod poly;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;

/// Complex double, the working scalar of all numeric modules.
pub type C64 = num_complex::Complex64;

/// A point of the Riemann sphere: either finite or the point at infinity.
///
/// Used wherever a pole is a legitimate result rather than an error
/// (Jacobi cd at its poles, the Weierstrass function on the lattice,
/// critical values of elliptic rational functions).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjValue {
    Finite(C64),
    Infinity,
}

impl ProjValue {
    /// The finite value, if any.
    pub fn finite(self) -> Option<C64> {
        match self {
            ProjValue::Finite(v) => Some(v),
            ProjValue::Infinity => None,
        }
    }

    pub fn is_infinity(self) -> bool {
        matches!(self, ProjValue::Infinity)
    }

    /// Spherical (chordal-style) distance, so that values near the pole
    /// compare through their reciprocals.
    pub fn dist(self, other: ProjValue) -> f64 {
        use ProjValue::*;
        match (self, other) {
            (Infinity, Infinity) => 0.0,
            (Finite(a), Finite(b)) => {
                let na = a.norm();
                let nb = b.norm();
                if na > 1.0 && nb > 1.0 {
                    (a.inv() - b.inv()).norm()
                } else {
                    (a - b).norm()
                }
            }
            (Finite(a), Infinity) | (Infinity, Finite(a)) => {
                let n = a.norm();
                if n <= 1.0 {
                    1.0
                } else {
                    1.0 / n
                }
            }
        }
    }
}

impl From<C64> for ProjValue {
    fn from(v: C64) -> Self {
        ProjValue::Finite(v)
    }
}
