//! Weighted sums of `ψ_{a,b}` and `ψ′_{a,b}` against their predicted main
//! terms `ζ(2)^{-1}Ψ(a,b)∫g` and `ΞΨ′(a,b)∫g`.

use super::constants::xi_constant;
use super::functions::{phi_plus_f64, phi_star_f64, psi_cap, psi_prime_cap};
use crate::quadrature::adaptive_simpson;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;
use std::sync::OnceLock;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PsiMode {
    Psi,
    PsiPrime,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct WeightedSum {
    pub sum: f64,
    pub main_term: f64,
    pub residual: f64,
}

fn xi_value() -> f64 {
    static XI: OnceLock<f64> = OnceLock::new();
    *XI.get_or_init(|| xi_constant(100_000).mid())
}

fn psi_f64(a: u64, b: u64, n: u64, mode: PsiMode) -> f64 {
    if n.gcd(&b) != 1 {
        return 0.0;
    }
    let g = n.gcd(&a);
    let s = phi_star_f64(n) / phi_star_f64(g);
    match mode {
        PsiMode::Psi => s,
        PsiMode::PsiPrime => s * s * phi_plus_f64(n) / phi_plus_f64(g),
    }
}

/// `Σ_{n ∈ [t1, t2]} ψ(n) g(n)`, its main term, and their difference.
///
/// The residual is a measured quantity; the implied constants in the error
/// terms are not explicit, so nothing here asserts a bound on it.
pub fn weighted_psi_sum(a: u64, b: u64, t1: f64, t2: f64, g: impl Fn(f64) -> f64, mode: PsiMode) -> WeightedSum {
    let lo = t1.max(0.0);
    if t2 < 1.0 || t2 <= lo {
        return WeightedSum::default();
    }
    let first = (lo.ceil() as u64).max(1);
    let last = t2.floor() as u64;
    // Kahan summation: the terms are all of one size and N can reach 10⁷
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for n in first..=last {
        let y = psi_f64(a, b, n, mode) * g(n as f64) - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    let integral = adaptive_simpson(&g, lo, t2, 1e-10);
    let coeff = match mode {
        PsiMode::Psi => psi_cap(a, b).to_f64().unwrap() * 6.0 / std::f64::consts::PI.powi(2),
        PsiMode::PsiPrime => xi_value() * psi_prime_cap(a, b).to_f64().unwrap(),
    };
    let main_term = coeff * integral;
    WeightedSum { sum, main_term, residual: sum - main_term }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_range_is_zero() {
        assert_eq!(weighted_psi_sum(1, 1, 0.0, 0.5, |_| 1.0, PsiMode::Psi), WeightedSum::default());
    }

    #[test]
    fn phi_star_mean_value() {
        // Σ_{n≤N} φ*(n) = (6/π²)N + O(log N)
        let n = 100_000.0;
        let w = weighted_psi_sum(1, 1, 0.0, n, |_| 1.0, PsiMode::Psi);
        let direct: f64 = (1..=100_000u64).map(phi_star_f64).sum();
        assert!((w.sum - direct).abs() < 1e-6);
        assert!(w.residual.abs() < 3.0 * n.ln());
    }

    #[test]
    fn psi_prime_mean_value() {
        for (a, b) in [(1, 1), (2, 3), (6, 5)] {
            let n = 10_000.0f64;
            let w = weighted_psi_sum(a, b, 0.0, n, |_| 1.0, PsiMode::PsiPrime);
            assert!(w.residual.abs() < 5.0 * n.sqrt(), "(a,b)=({a},{b}): {w:?}");
        }
    }

    #[test]
    fn weighted_by_decreasing_function() {
        let w = weighted_psi_sum(3, 2, 1.0, 50_000.0, |t| 1.0 / t.sqrt(), PsiMode::Psi);
        assert!(w.main_term > 0.0);
        assert!(w.residual.abs() < 4.0 * 50_000f64.ln());
    }
}
