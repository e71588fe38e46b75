//! Rational points of bounded height on the split cubic surface
//!
//! ```text
//! V : x3^2 (x1 + x3) + x0 x1 x2 = 0      (singularity type 2A2 + A1)
//! ```
//!
//! The crate counts points of `U = V \ {lines}` with `max |x_i| <= B` in
//! three independent ways (two surface-side enumerations and one on the
//! universal torsor), computes every ingredient of the Peyre constant, and
//! runs the exact-identity and equidistribution experiments that the
//! asymptotic `N(B) ~ c B log(B)^6` rests on.
//!
//! Module map:
//!
//! * [`arith`]: factorization, Möbius machinery and the multiplicative
//!   functions `phi*`, `phi+`, `phi×`, `psi`, `psi'`.
//! * [`surface`]: the cubic form, its lines and singular points, and
//!   point counts by naive and direct enumeration.
//! * [`torsor`]: the gcd cascade, its inverse, coprimality / height
//!   checkers and the torsor-side count.
//! * [`equidist`]: restricted divisor counts in arithmetic progressions.
//! * [`peyre`]: `alpha` (two ways), `omega_p`, `omega_inf` (two ways),
//!   the Euler product and the assembled constant.
//! * [`asymptotics`]: main-term geometry, `Theta`, local factors and the
//!   empirical Manin ratio.

pub mod arith;
pub mod asymptotics;
pub mod equidist;
mod error;
pub mod interval;
pub mod peyre;
pub mod quadrature;
pub mod rng;
pub mod surface;
pub mod torsor;

pub use error::{Error, Result};

/// Exact rational, the carrier of every multiplicative-function value.
pub type Rat = num_rational::BigRational;
