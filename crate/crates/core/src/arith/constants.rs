//! Certified enclosures of `ζ(2)`, `Ξ = ∏_p φ×(p)^{-1}` and the prime-tail
//! machinery shared with the Euler product of the Peyre constant.

use super::functions::{phi_times_prime, phi_times_prime_f64};
use super::sieve::primes_up_to;
use crate::interval::Interval;
use crate::Rat;
use num_bigint::BigInt;
use num_traits::One;

/// Enclosure of `Σ_{p > P} log F(p)` for an Euler factor with
/// `−c₂x² − a x³ ≤ log F ≤ −c₂x² + b x³` at `x = 1/p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogTail {
    pub lo: f64,
    pub hi: f64,
}

/// Bounds for `Σ_{p>P} p^{-2}` and `Σ_{p>P} p^{-3}`.
///
/// Partial summation gives `Σ_{p>P} p^{-2} = −π(P)/P² + 2∫_P^∞ π(t) t^{-3} dt`.
/// Dusart's `t/ln t (1 + 1/ln t) ≤ π(t)` (for `t ≥ 599`) integrates exactly to
/// a lower bound `2/(P ln P) − π(P)/P²`; `π(t) ≤ t/ln t (1 + 1.2762/ln t)`
/// (all `t > 1`) gives the upper bound after one integration by parts. Both
/// bounds shrink by at least the primes they pass, so enclosures built on them
/// are nested in `P`.
fn prime_power_tails(p_max: u64, pi_p: u64) -> (f64, f64, f64) {
    let p = p_max as f64;
    let l = p.ln();
    let head = pi_p as f64 / (p * p);
    let s2_lo = if p_max >= 599 { (2.0 / (p * l) - head).max(0.0) } else { 0.0 };
    let s2_hi = 2.0 / (p * l) + 0.5524 / (p * l * l) - head;
    let s3_hi = 0.5 / (p * p);
    (s2_lo, s2_hi, s3_hi)
}

pub fn prime_log_tail(p_max: u64, pi_p: u64, c2: f64, a: f64, b: f64) -> LogTail {
    let (s2_lo, s2_hi, s3_hi) = prime_power_tails(p_max, pi_p);
    LogTail { lo: -c2 * s2_hi - a * s3_hi, hi: -c2 * s2_lo + b * s3_hi }
}

/// `∏_{p ≤ p_max} factor(p)` in floating point times `exp(tail)`, padded for
/// the rounding of the running product.
pub fn euler_enclosure(primes: &[u64], factor: impl Fn(u64) -> f64, tail: LogTail) -> Interval {
    let partial: f64 = primes.iter().map(|&p| factor(p)).product();
    let rounding = (primes.len() as f64 + 10.0) * 16.0 * f64::EPSILON;
    let lo = partial * tail.lo.exp() * (1.0 - rounding);
    let hi = partial * tail.hi.exp() * (1.0 + rounding);
    Interval::new(lo, hi)
}

/// Certified enclosure of `Ξ` from the primes `≤ p_max` plus an explicit tail.
///
/// With `x = 1/p`, `−3x² − x³/2 ≤ log φ×(p)^{-1} ≤ −3x² + 4x³` for `x ≤ 1/3`.
pub fn xi_constant(p_max: u64) -> Interval {
    assert!(p_max >= 2, "xi_constant: p_max must be at least 2");
    let primes = primes_up_to(p_max);
    let tail = prime_log_tail(p_max, primes.len() as u64, 3.0, 0.5, 4.0);
    euler_enclosure(&primes, |p| 1.0 / phi_times_prime_f64(p), tail)
}

/// Exact partial product `∏_{p ≤ p_max} φ×(p)^{-1}`.
pub fn xi_partial_exact(p_max: u64) -> Rat {
    primes_up_to(p_max)
        .into_iter()
        .fold(Rat::one(), |acc, p| acc / phi_times_prime(p))
}

/// Rational bracket of `ζ(2)`: `S_N + 1/(N+1) ≤ ζ(2) ≤ S_N + 1/N`.
pub fn zeta2_bounds(n: u64) -> (Rat, Rat) {
    let mut s = Rat::new(BigInt::from(0), BigInt::one());
    for k in 1..=n {
        s += Rat::new(BigInt::one(), BigInt::from(k * k));
    }
    let lo = &s + Rat::new(BigInt::one(), BigInt::from(n + 1));
    let hi = s + Rat::new(BigInt::one(), BigInt::from(n));
    (lo, hi)
}

#[derive(Clone, Debug)]
pub struct ArithConstants {
    pub zeta2: (Rat, Rat),
    pub xi: Interval,
}

impl ArithConstants {
    pub fn compute(p_max: u64) -> Self {
        Self { zeta2: zeta2_bounds(200), xi: xi_constant(p_max) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn exact_partials() {
        assert_eq!(xi_partial_exact(2), Rat::new(7.into(), 12.into()));
        assert_eq!(xi_partial_exact(3), Rat::new(49.into(), 108.into()));
    }

    #[test]
    fn tail_at_two_contains_deep_value() {
        let coarse = xi_constant(2);
        let fine = xi_constant(100_000);
        assert!(coarse.contains(fine.mid()));
        assert!(fine.is_subset_of(&coarse), "{fine} vs {coarse}");
    }

    #[test]
    fn nested_and_shrinking() {
        let grid = [2u64, 10, 100, 598, 599, 1000, 10_000, 100_000];
        let ivs: Vec<Interval> = grid.iter().map(|&p| xi_constant(p)).collect();
        for w in ivs.windows(2) {
            assert!(w[1].is_subset_of(&w[0]), "{} not inside {}", w[1], w[0]);
            assert!(w[1].width() <= w[0].width());
        }
        let deep = ivs.last().unwrap();
        assert!(deep.contains(0.358_231_63), "{deep}");
        assert!(deep.width() < 1e-7);
    }

    #[test]
    fn prime_square_tail_brackets_direct_sum() {
        let primes = primes_up_to(2_000_000);
        for p_max in [10u64, 600, 1000, 20_000] {
            let pi = primes.partition_point(|&p| p <= p_max) as u64;
            let direct: f64 = primes[pi as usize..].iter().map(|&p| 1.0 / (p as f64 * p as f64)).sum();
            let (lo, hi, _) = prime_power_tails(p_max, pi);
            // the direct sum misses primes above 2·10⁶ (< 1/(2·10⁶·ln(2·10⁶)))
            assert!(lo <= direct + 4e-8 && direct <= hi, "P={p_max}: {lo} {direct} {hi}");
        }
    }

    #[test]
    fn zeta2_bracket() {
        let (lo, hi) = zeta2_bounds(50);
        let z = std::f64::consts::PI.powi(2) / 6.0;
        assert!(lo.to_f64().unwrap() <= z && z <= hi.to_f64().unwrap());
    }
}
