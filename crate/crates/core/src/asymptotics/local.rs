use super::EtaPrime;
use crate::arith::{factorize, mobius, phi_plus, phi_star, phi_times, phi_times_prime};
use crate::peyre::omega_p;
use crate::{Error, Result, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

fn rat(n: u64, d: u64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Product of the distinct primes dividing any of `xs`. The functions below
/// depend on their argument only through its radical, so products of
/// components never have to be formed.
fn radical(xs: &[u64]) -> u64 {
    let primes: BTreeSet<u64> = xs.iter().flat_map(|&x| factorize(x).primes().collect::<Vec<_>>()).collect();
    primes.into_iter().try_fold(1u64, |a, p| a.checked_mul(p)).expect("radical overflows u64")
}

/// `φ*(η2η3η5) φ*(η2η3η4η5η10) φ⁺(η2η3η4η5η10)`.
pub fn theta1(e: &EtaPrime) -> Rat {
    let all = radical(&[e.eta2, e.eta3, e.eta4, e.eta5, e.eta10]);
    phi_star(radical(&[e.eta2, e.eta3, e.eta5])) * phi_star(all) * phi_plus(all)
}

/// `φ*(η7)²/φ*(g)² · φ⁺(η7)/φ⁺(g)` with `g = gcd(η7, η3η5)`.
pub fn theta2(e: &EtaPrime, eta7: u64) -> Rat {
    let g = radical(&[eta7]).gcd(&radical(&[e.eta3, e.eta5]));
    let s = phi_star(eta7) / phi_star(g);
    &s * &s * phi_plus(eta7) / phi_plus(g)
}

fn coprime_conditions(e: &EtaPrime) -> bool {
    let r23 = radical(&[e.eta2, e.eta3]);
    let r45 = radical(&[e.eta4, e.eta5]);
    r23.gcd(&r45) == 1 && e.eta10.gcd(&radical(&[e.eta3, e.eta4, e.eta5])) == 1
}

/// `Θ(η′) = θ1(η′) φ*(η2η4η10) φ×(η2η3η4η5η10)`, and `0` unless
/// `gcd(η2η3, η4η5) = gcd(η10, η3η4η5) = 1`.
pub fn theta(e: &EtaPrime) -> Rat {
    if !coprime_conditions(e) {
        return Rat::zero();
    }
    theta1(e) * phi_star(radical(&[e.eta2, e.eta4, e.eta10])) * phi_times(radical(&[e.eta2, e.eta3, e.eta4, e.eta5, e.eta10]))
}

/// Floating-point `Θ` for the summation loops, from one factorization per component.
pub fn theta_f64(e: &EtaPrime) -> f64 {
    let ps = |x: u64| factorize(x).primes().collect::<Vec<_>>();
    let (p2, p3, p4, p5, p10) = (ps(e.eta2), ps(e.eta3), ps(e.eta4), ps(e.eta5), ps(e.eta10));
    let meets = |a: &[&Vec<u64>], b: &[&Vec<u64>]| a.iter().any(|x| x.iter().any(|p| b.iter().any(|y| y.contains(p))));
    if meets(&[&p2, &p3], &[&p4, &p5]) || meets(&[&p10], &[&p3, &p4, &p5]) {
        return 0.0;
    }
    let set = |groups: &[&Vec<u64>]| groups.iter().flat_map(|g| g.iter().copied()).collect::<BTreeSet<u64>>();
    let star = |s: &BTreeSet<u64>| s.iter().map(|&p| 1.0 - 1.0 / p as f64).product::<f64>();
    let all = set(&[&p2, &p3, &p4, &p5, &p10]);
    let plus: f64 = all.iter().map(|&p| p as f64 / (p as f64 + 1.0)).product();
    let times: f64 = all.iter().map(|&p| crate::arith::phi_times_prime_f64(p)).product();
    star(&set(&[&p2, &p3, &p5])) * star(&all) * plus * star(&set(&[&p2, &p4, &p10])) * times
}

/// `μ(n1)⋯μ(n6)`.
pub fn mobius6(e: &EtaPrime) -> i32 {
    e.as_array().iter().map(|&n| i32::from(mobius(n))).product()
}

fn require_prime(p: u64) -> Result<()> {
    if crate::arith::is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{p} is not prime")))
    }
}

/// `Σ_{k ∈ Z≥0⁵} Θ(1, p^k2, p^k3, p^k4, p^k5, p^k10) / p^{k2+k3+k4+k5+k10}`.
///
/// `Θ` at prime powers only sees which exponents are positive, so each of the
/// 32 support patterns contributes `Θ(pattern) (p − 1)^{-|pattern|}`.
pub fn local_factor(p: u64) -> Result<Rat> {
    require_prime(p)?;
    let mut total = Rat::zero();
    for mask in 0u32..32 {
        let c = |i: u32| if mask >> i & 1 == 1 { p } else { 1 };
        let e = EtaPrime::new([1, c(0), c(1), c(2), c(3), c(4)])?;
        let weight = Rat::new(BigInt::one(), BigInt::from(p - 1).pow(mask.count_ones()));
        total += theta(&e) * weight;
    }
    Ok(total)
}

/// `φ⁺(p) φ×(p) (1 − 1/p) ω_p`.
pub fn local_factor_closed_form(p: u64) -> Result<Rat> {
    require_prime(p)?;
    Ok(phi_plus(p) * phi_times_prime(p) * rat(p - 1, p) * omega_p(p)?)
}

/// `(1 − 1/p)⁵ · local_factor(p) = (1 − 1/p²)^{-1} φ×(p) (1 − 1/p)⁷ ω_p`.
pub fn sum2_check(p: u64) -> Result<bool> {
    let q = rat(p - 1, p);
    let lhs = q.pow(5) * local_factor(p)?;
    let rhs = (Rat::one() - rat(1, p * p)).recip() * phi_times_prime(p) * q.pow(7) * omega_p(p)?;
    Ok(lhs == rhs)
}

/// Direct truncated sum behind [`local_factor`] with every exponent `≤ k_max`.
pub fn local_factor_truncated(p: u64, k_max: u32) -> Result<Rat> {
    require_prime(p)?;
    let mut total = Rat::zero();
    let n = k_max + 1;
    for idx in 0..n.pow(5) {
        let ks: Vec<u32> = (0..5).map(|i| idx / n.pow(i) % n).collect();
        let e = EtaPrime::new([1, p.pow(ks[0]), p.pow(ks[1]), p.pow(ks[2]), p.pow(ks[3]), p.pow(ks[4])])?;
        let den = p.pow(ks.iter().sum());
        total += theta(&e) * rat(1, den);
    }
    Ok(total)
}
