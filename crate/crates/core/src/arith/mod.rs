//! Arithmetic kernel: factorization, Möbius machinery and the multiplicative
//! functions `φ*`, `φ⁺`, `φ×`, `ψ`, `ψ′` together with their summatory
//! experiments.

mod constants;
mod functions;
mod sieve;
mod summation;

pub use constants::{euler_enclosure, prime_log_tail, xi_constant, xi_partial_exact, zeta2_bounds, ArithConstants, LogTail};
pub use functions::*;
pub use sieve::{factorize, is_prime, primes_up_to, sieve, Factorization, Sieve};
pub use summation::{weighted_psi_sum, PsiMode, WeightedSum};

/// `gcd` on signed machine integers.
pub fn gcd_i64(a: i64, b: i64) -> u64 {
    num_integer::gcd(a.unsigned_abs(), b.unsigned_abs())
}

/// `φ(q)`, Euler's totient.
pub fn euler_phi(q: u64) -> u64 {
    factorize(q).pairs().iter().map(|&(p, e)| (p - 1) * p.pow(e - 1)).product()
}
