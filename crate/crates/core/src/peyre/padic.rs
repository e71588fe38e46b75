//! `ω_p` in closed form and by counting solutions of `f ≡ 0 (mod pⁿ)`.

use crate::arith::is_prime;
use crate::{Error, Result, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

/// Largest `p^{4n}` the exhaustive count accepts.
pub const PADIC_BUDGET: u64 = 1_000_000_000;

/// `1 + 7/p + 1/p²`.
pub fn omega_p(p: u64) -> Result<Rat> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("omega_p: {p} is not prime")));
    }
    let p = BigInt::from(p);
    Ok(Rat::new(&p * &p + 7u32 * &p + 1u32, &p * &p))
}

pub fn omega_p_f64(p: u64) -> f64 {
    let x = 1.0 / p as f64;
    1.0 + 7.0 * x + x * x
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PadicCount {
    pub p: u64,
    pub n: u32,
    pub count: u64,
    /// `count / p^{3n}`.
    pub density: f64,
}

/// `#{x mod pⁿ : f(x) ≡ 0}`.
///
/// For fixed `(x0, x1, x3)` the congruence is linear in `x2`, with `gcd(x0x1, pⁿ)`
/// solutions when that gcd divides `x3²(x1 + x3)` and none otherwise, so the
/// scan costs `p^{3n}` instead of `p^{4n}`.
pub fn count_solutions_padic(p: u64, n: u32) -> Result<PadicCount> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("count_solutions_padic: {p} is not prime")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("count_solutions_padic: n must be positive".into()));
    }
    let m = p
        .checked_pow(n)
        .filter(|m| m.checked_pow(4).is_some_and(|q| q <= PADIC_BUDGET))
        .ok_or_else(|| Error::BudgetExceeded(format!("p^(4n) > {PADIC_BUDGET} for p={p}, n={n}")))?;
    let count: u64 = (0..m)
        .into_par_iter()
        .map(|x0| {
            let mut c = 0u64;
            for x1 in 0..m {
                let g = (x0 * x1 % m).gcd(&m);
                for x3 in 0..m {
                    let r = x3 * x3 % m * ((x1 + x3) % m) % m;
                    if r % g == 0 {
                        c += g;
                    }
                }
            }
            c
        })
        .sum();
    Ok(PadicCount { p, n, count, density: count as f64 / (m as f64).powi(3) })
}

/// Densities for `n = 1..=n_max`.
pub fn padic_densities(p: u64, n_max: u32) -> Result<Vec<PadicCount>> {
    (1..=n_max).map(|n| count_solutions_padic(p, n)).collect()
}
