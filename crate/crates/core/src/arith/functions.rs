//! The multiplicative functions of the counting argument.
//!
//! Every function here is a product over the distinct primes of its argument,
//! so each is evaluated from one factorization. Exact values are [`Rat`];
//! `*_f64` twins exist for the hot summation loops.

use super::sieve::{factorize, Factorization};
use crate::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// `∏_{p | n} num(p)/den(p)` with exact big-integer accumulation.
fn prime_product(f: &Factorization, num: impl Fn(u64) -> u128, den: impl Fn(u64) -> u128) -> Rat {
    let mut n = BigInt::one();
    let mut d = BigInt::one();
    for p in f.primes() {
        n *= BigInt::from(num(p));
        d *= BigInt::from(den(p));
    }
    Rat::new(n, d)
}

pub fn mobius(n: u64) -> i8 {
    let f = factorize(n);
    if !f.is_squarefree() {
        0
    } else if f.pairs().len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn omega_distinct(n: u64) -> u32 {
    factorize(n).pairs().len() as u32
}

/// Ordered factorizations into three factors: `∏ C(e+2, 2)`.
pub fn tau3(n: u64) -> u64 {
    factorize(n)
        .pairs()
        .iter()
        .map(|&(_, e)| (e as u64 + 1) * (e as u64 + 2) / 2)
        .product()
}

/// `φ*(n) = ∏_{p|n} (1 − 1/p)`.
pub fn phi_star(n: u64) -> Rat {
    prime_product(&factorize(n), |p| (p - 1) as u128, |p| p as u128)
}

/// `φ⁺(n) = ∏_{p|n} (1 + 1/p)^{-1}`.
pub fn phi_plus(n: u64) -> Rat {
    prime_product(&factorize(n), |p| p as u128, |p| (p + 1) as u128)
}

/// `φ×(n) = ∏_{p|n} (1 + 1/p)(1 − 1/p)^{-1}(1 + 2/p − 1/p²)^{-1}`,
/// i.e. `(p+1)p² / ((p−1)(p²+2p−1))` per prime.
pub fn phi_times(n: u64) -> Rat {
    prime_product(
        &factorize(n),
        |p| (p as u128 + 1) * (p as u128) * (p as u128),
        |p| (p as u128 - 1) * ((p as u128) * (p as u128) + 2 * p as u128 - 1),
    )
}

pub fn phi_times_prime(p: u64) -> Rat {
    let p = p as i128;
    Rat::new(BigInt::from((p + 1) * p * p), BigInt::from((p - 1) * (p * p + 2 * p - 1)))
}

pub fn phi_star_f64(n: u64) -> f64 {
    factorize(n).primes().map(|p| 1.0 - 1.0 / p as f64).product()
}

pub fn phi_plus_f64(n: u64) -> f64 {
    factorize(n).primes().map(|p| 1.0 / (1.0 + 1.0 / p as f64)).product()
}

pub fn phi_times_f64(n: u64) -> f64 {
    factorize(n).primes().map(phi_times_prime_f64).product()
}

pub fn phi_times_prime_f64(p: u64) -> f64 {
    let x = 1.0 / p as f64;
    (1.0 + x) / ((1.0 - x) * (1.0 + 2.0 * x - x * x))
}

/// `σ_{−λ}(n) = Σ_{k|n} k^{−λ}`.
pub fn sigma_neg(lambda: f64, n: u64) -> f64 {
    factorize(n)
        .pairs()
        .iter()
        .map(|&(p, e)| {
            let r = (p as f64).powf(-lambda);
            let mut s = 1.0;
            let mut t = 1.0;
            for _ in 0..e {
                t *= r;
                s += t;
            }
            s
        })
        .product()
}

/// `ψ_{a,b}(n)`: `φ*(n)/φ*(gcd(a,n))` when `gcd(n,b) = 1`, else 0.
pub fn psi(a: u64, b: u64, n: u64) -> Rat {
    if n.gcd(&b) != 1 {
        return Rat::zero();
    }
    phi_star(n) / phi_star(n.gcd(&a))
}

/// `ψ′_{a,b}(n)`: `φ*(n)²φ*(g)^{-2} φ⁺(n)φ⁺(g)^{-1}` with `g = gcd(a,n)`, when
/// `gcd(n,b) = 1`, else 0.
pub fn psi_prime(a: u64, b: u64, n: u64) -> Rat {
    if n.gcd(&b) != 1 {
        return Rat::zero();
    }
    let g = n.gcd(&a);
    let s = phi_star(n) / phi_star(g);
    &s * &s * phi_plus(n) / phi_plus(g)
}

/// `(ψ′_{a,b} ∗ μ)(n)` in closed form: zero unless `n` is squarefree and
/// `gcd(n,a) | b`, and otherwise `μ(n) ∏_{p|n, p∤b} (3p−1)/(p(p+1))`.
pub fn psi_prime_mobius(a: u64, b: u64, n: u64) -> Rat {
    let f = factorize(n);
    if !f.is_squarefree() || !b.is_multiple_of(n.gcd(&a)) {
        return Rat::zero();
    }
    let mut v = prime_product(
        &f,
        |p| if b.is_multiple_of(p) { 1 } else { 3 * p as u128 - 1 },
        |p| if b.is_multiple_of(p) { 1 } else { p as u128 * (p as u128 + 1) },
    );
    if f.pairs().len() % 2 == 1 {
        v = -v;
    }
    v
}

/// `Ψ(a,b) = φ*(b) φ⁺(ab) / φ*(ab)`.
pub fn psi_cap(a: u64, b: u64) -> Rat {
    phi_star(b) * phi_plus(a * b) / phi_star(a * b)
}

/// `Ψ′(a,b) = φ*(b) φ×(ab)`.
pub fn psi_prime_cap(a: u64, b: u64) -> Rat {
    phi_star(b) * phi_times(a * b)
}

/// Dirichlet convolution `(f ∗ g)(n) = Σ_{d|n} f(d) g(n/d)`.
pub fn dirichlet_convolve(f: impl Fn(u64) -> Rat, g: impl Fn(u64) -> Rat, n: u64) -> Rat {
    factorize(n)
        .divisors()
        .into_iter()
        .fold(Rat::zero(), |acc, d| acc + f(d) * g(n / d))
}

pub fn mobius_rat(n: u64) -> Rat {
    rat(mobius(n) as i64, 1)
}
