//! Peyre's constant `c = α β ω_H` for the surface.

mod omega;
mod padic;
mod polytope;

pub(crate) use omega::crossings;
pub use omega::{
    h_eval, in_region, jacobian_crosscheck, omega_infty, omega_infty_a, omega_infty_b, t8_measure, x_region,
    JacobianReport, OmegaEstimate, T0,
};
pub use padic::{count_solutions_padic, omega_p, omega_p_f64, padic_densities, PadicCount, PADIC_BUDGET};
pub use polytope::{polytope_volume, PolytopeH};

use crate::arith::{euler_enclosure, prime_log_tail, primes_up_to};
use crate::interval::Interval;
use crate::{Error, Result, Rat};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use std::sync::OnceLock;

/// `#W(A_n) = (n+1)!`.
pub fn weyl_order(n: u64) -> u64 {
    (1..=n + 1).product()
}

/// `α = 1/120 · 1/(#W(A2)² #W(A1))`.
pub fn alpha_weyl() -> Rat {
    let d = 120 * weyl_order(2) * weyl_order(2) * weyl_order(1);
    Rat::new(BigInt::one(), BigInt::from(d))
}

/// Volume of [`PolytopeH::cubic_surface`] divided by 3.
pub fn alpha_polytope() -> Rat {
    static CELL: OnceLock<Rat> = OnceLock::new();
    CELL.get_or_init(|| {
        polytope_volume(&PolytopeH::cubic_surface()).expect("polytope is bounded and nonempty") / BigInt::from(3)
    })
    .clone()
}

fn euler_factor(p: u64) -> f64 {
    let x = 1.0 / p as f64;
    (1.0 - x).powi(7) * (1.0 + 7.0 * x + x * x)
}

/// `∏_{p ≤ pmax} (1 − 1/p)⁷ ω_p`, exactly.
pub fn euler_partial_exact(pmax: u64) -> Rat {
    primes_up_to(pmax).into_iter().fold(Rat::one(), |acc, p| {
        let w = omega_p(p).expect("prime");
        let q = Rat::new(BigInt::from(p - 1), BigInt::from(p));
        acc * w * q.pow(7)
    })
}

/// Enclosure of `∏_p (1 − 1/p)⁷ (1 + 7/p + 1/p²)`.
///
/// With `x = 1/p` the log-factor is `−27x² + O(x³)`; for `x ≤ 1/(P+1)` it lies
/// between `−27x² − a x³` and `−27x² + b x³` with
/// `a = 7/(3(1−x)) + 7 + x/2` and `b = (7+x)³/3 − 28/3`.
pub fn euler_product(pmax: u64) -> Result<Interval> {
    if pmax < 2 {
        return Err(Error::InvalidArgument("euler_product: pmax must be at least 2".into()));
    }
    let primes = primes_up_to(pmax);
    let x = 1.0 / (pmax as f64 + 1.0);
    let a = 7.0 / (3.0 * (1.0 - x)) + 7.0 + x / 2.0;
    let b = (7.0 + x).powi(3) / 3.0 - 28.0 / 3.0;
    let tail = prime_log_tail(pmax, primes.len() as u64, 27.0, a, b);
    Ok(euler_enclosure(&primes, euler_factor, tail))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeyreBreakdown {
    pub alpha: Rat,
    pub beta: Rat,
    pub omega_inf: Interval,
    pub euler_product: Interval,
    pub pmax: u64,
    pub c_vh: Interval,
}

pub fn rat_interval(r: &Rat) -> Interval {
    Interval::point(r.to_f64().expect("finite rational")).pad_ulps(1)
}

pub fn c_vh(tolerance: f64, pmax: u64) -> Result<PeyreBreakdown> {
    let alpha = alpha_polytope();
    if alpha != alpha_weyl() {
        return Err(Error::BadPolytope(format!("polytope gives alpha = {alpha}, Weyl groups give {}", alpha_weyl())));
    }
    let omega_inf = omega_infty(tolerance)?;
    let euler = euler_product(pmax)?;
    let c = rat_interval(&alpha) * omega_inf * euler;
    Ok(PeyreBreakdown { alpha, beta: Rat::one(), omega_inf, euler_product: euler, pmax, c_vh: c })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn alpha_two_ways() {
        assert_eq!(weyl_order(2), 6);
        assert_eq!(weyl_order(1), 2);
        assert_eq!(alpha_weyl(), q(1, 8640));
        assert_eq!(alpha_polytope(), alpha_weyl());
    }

    #[test]
    fn exact_partial_products() {
        assert_eq!(euler_partial_exact(2), q(19, 512));
        assert_eq!(euler_partial_exact(3), q(19, 512) * q(128, 2187) * q(31, 9));
        let e = euler_product(3).unwrap();
        assert!(e.contains(euler_partial_exact(1000).to_f64().unwrap()));
    }

    #[test]
    fn euler_intervals_nest_and_tighten() {
        let grid = [2, 10, 100, 598, 599, 1000, 10_000, 100_000];
        let ivs: Vec<Interval> = grid.iter().map(|&p| euler_product(p).unwrap()).collect();
        for w in ivs.windows(2) {
            assert!(w[1].is_subset_of(&w[0]), "{} not inside {}", w[1], w[0]);
        }
        let (a, b) = (&ivs[6], &ivs[7]);
        assert!(a.intersects(b));
        assert!(a.width() < 1e-6 && b.width() < 1e-6);
        assert!(b.contains(0.001317641));
    }

    #[test]
    fn assembled_constant() {
        let coarse = c_vh(1e-4, 1000).unwrap();
        let fine = c_vh(1e-6, 100_000).unwrap();
        assert_eq!(fine.beta, Rat::one());
        assert_eq!(fine.alpha, q(1, 8640));
        assert!(fine.c_vh.width() < coarse.c_vh.width());
        assert!(fine.c_vh.intersects(&coarse.c_vh));
        let direct = fine.omega_inf * fine.euler_product;
        assert!(direct.scale(1.0 / 8640.0).intersects(&fine.c_vh));
    }
}
