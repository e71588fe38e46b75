use super::local::{theta, theta_f64};
use super::{vprime_member, EtaPrime};
use crate::arith::xi_constant;
use crate::interval::Interval;
use crate::peyre::{alpha_polytope, alpha_weyl, c_vh, euler_product, omega_infty, rat_interval};
use crate::surface::count_direct_cumulative;
use crate::{Error, Result, Rat};
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write;

/// Largest `B` accepted by [`sum1_experiment`].
pub const SUM1_MAX_B: u64 = 100_000;

fn recip(i: Interval) -> Interval {
    assert!(i.lo > 0.0, "recip of an interval containing 0");
    Interval::new(1.0 / i.hi, 1.0 / i.lo).pad_ulps(1)
}

/// `π²/6`, padded for the rounding of `π` and of the arithmetic.
fn zeta2_interval() -> Interval {
    Interval::point(std::f64::consts::PI * std::f64::consts::PI / 6.0).pad_ulps(4)
}

/// `α ζ(2) Ξ^{-1} ∏_p (1 − 1/p)⁷ ω_p`, the predicted limit of `Σ_{V′} Θ/η′ / log(B)⁶`.
pub fn sum1_limit(pmax: u64) -> Result<Interval> {
    let alpha = rat_interval(&(alpha_polytope() * BigInt::from(3)));
    Ok(alpha * zeta2_interval() * recip(xi_constant(pmax)) * euler_product(pmax)?)
}

/// Exact `Σ_{η′ ∈ V′} Θ(η′)/(η1″η2η3η4η5η10)` by scanning every tuple with
/// `η1″η2²η3η10 ≤ B` and `η2η3²η4η5² ≤ B` against [`vprime_member`].
pub fn sum1_exact(b: u64) -> Result<Rat> {
    if !(3..=400).contains(&b) {
        return Err(Error::BudgetExceeded("sum1_exact handles 3 ≤ B ≤ 400".into()));
    }
    let mut total = Rat::zero();
    for n2 in (1..).take_while(|n2| n2 * n2 <= b) {
        for n3 in (1..).take_while(|n3| n2 * n2 * n3 <= b) {
            for n1 in (1..).take_while(|n1| n1 * n2 * n2 * n3 <= b) {
                for n10 in (1..).take_while(|n10| n1 * n2 * n2 * n3 * n10 <= b) {
                    for n4 in (1..).take_while(|n4| n2 * n3 * n3 * n4 <= b) {
                        for n5 in (1..).take_while(|n5| n2 * n3 * n3 * n4 * n5 * n5 <= b) {
                            let e = EtaPrime::new([n1, n2, n3, n4, n5, n10])?;
                            if vprime_member(&e, b) {
                                let den = BigInt::from(n1 * n2 * n3 * n4 * n5 * n10);
                                total += theta(&e) / den;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(total)
}

/// The same sum in floating point. `Θ` does not depend on `η1″`, whose range is
/// `1 ≤ η1″ ≤ min(B/(η2²η3η10), (Bη2²η3η10³/(η4⁴η5²))^{1/3})`, so that
/// coordinate contributes a harmonic number.
pub fn sum1_value(b: u64) -> Result<f64> {
    if b < 3 {
        return Err(Error::InvalidArgument("sum1 needs B ≥ 3".into()));
    }
    if b > SUM1_MAX_B {
        return Err(Error::BudgetExceeded(format!("sum1 is limited to B ≤ {SUM1_MAX_B}")));
    }
    let mut harmonic = vec![0.0f64; b as usize + 1];
    for n in 1..=b as usize {
        harmonic[n] = harmonic[n - 1] + 1.0 / n as f64;
    }
    let pairs: Vec<(u64, u64)> = (1..)
        .take_while(|n2| n2 * n2 <= b)
        .flat_map(|n2| (1..).take_while(move |n3| n2 * n2 * n3 <= b && n2 * n3 * n3 <= b).map(move |n3| (n2, n3)))
        .collect();
    let bb = u128::from(b);
    let parts: Vec<f64> = pairs
        .par_iter()
        .map(|&(n2, n3)| {
            let mut acc = 0.0;
            for n4 in (1..).take_while(|n4| n2 * n3 * n3 * n4 <= b) {
                for n5 in (1..).take_while(|n5| n2 * n3 * n3 * n4 * n5 * n5 <= b) {
                    if (n2 * n3).gcd(&(n4 * n5)) != 1 {
                        continue;
                    }
                    let kappa_den = u128::from(n2 * n2 * n3) * u128::from(n4 * n4 * n5);
                    let y6_den = u128::from(n4).pow(4) * u128::from(n5).pow(2);
                    for n10 in 1u64.. {
                        let by8 = b / (n2 * n2 * n3 * n10);
                        if by8 == 0 || u128::from(n10).pow(6) * kappa_den > bb * bb {
                            break;
                        }
                        let by6 = (bb * u128::from(n2 * n2 * n3) * u128::from(n10).pow(3) / y6_den).cbrt();
                        let n1 = by8.min(by6.min(u128::from(b)) as u64);
                        if n1 == 0 {
                            continue;
                        }
                        let e = EtaPrime { eta1pp: 1, eta2: n2, eta3: n3, eta4: n4, eta5: n5, eta10: n10 };
                        let t = theta_f64(&e);
                        if t > 0.0 {
                            acc += t * harmonic[n1 as usize] / (n2 * n3 * n4 * n5 * n10) as f64;
                        }
                    }
                }
            }
            acc
        })
        .collect();
    Ok(parts.iter().sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sum1Row {
    pub b: u64,
    pub sum: f64,
    /// `sum / log(B)⁶`.
    pub ratio: f64,
    pub limit: Interval,
}

pub fn sum1_experiment(bs: &[u64], pmax: u64) -> Result<Vec<Sum1Row>> {
    let limit = sum1_limit(pmax)?;
    bs.iter()
        .map(|&b| {
            let sum = sum1_value(b)?;
            Ok(Sum1Row { b, sum, ratio: sum / (b as f64).ln().powi(6), limit })
        })
        .collect()
}

pub fn sum1_csv(rows: &[Sum1Row]) -> String {
    let mut s = String::from("B,sum,ratio,limit_lo,limit_hi\n");
    for r in rows {
        writeln!(s, "{},{},{},{},{}", r.b, r.sum, r.ratio, r.limit.lo, r.limit.hi).unwrap();
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ManinRow {
    #[serde(rename = "B")]
    pub b: u64,
    pub count: u64,
    /// `N(B) / (B log(B)⁶)`.
    pub ratio: f64,
    pub c_lo: f64,
    pub c_hi: f64,
}

/// `N(B)/(B log(B)⁶)` next to the Peyre constant `c`.
pub fn empirical_manin(bs: &[u64], c: Interval) -> Result<Vec<ManinRow>> {
    if bs.iter().any(|&b| b < 3) {
        return Err(Error::InvalidArgument("empirical_manin needs B ≥ 3".into()));
    }
    let Some(&max) = bs.iter().max() else { return Ok(Vec::new()) };
    let counts = count_direct_cumulative(max);
    Ok(bs
        .iter()
        .map(|&b| {
            let count = counts[b as usize];
            let bf = b as f64;
            ManinRow { b, count, ratio: count as f64 / (bf * bf.ln().powi(6)), c_lo: c.lo, c_hi: c.hi }
        })
        .collect())
}

pub fn manin_csv(rows: &[ManinRow]) -> String {
    let mut s = String::from("B,count,ratio,c_lo,c_hi\n");
    for r in rows {
        writeln!(s, "{},{},{},{},{}", r.b, r.count, r.ratio, r.c_lo, r.c_hi).unwrap();
    }
    s
}

/// Ingredients of the leading constant. `Ξ` enters twice, once from the
/// torsor count and once from the Dirichlet series; the two slots are kept
/// apart so that a mismatch between them is detectable.
#[derive(Clone, Debug, PartialEq)]
pub struct AssemblyInputs {
    pub zeta2: Interval,
    pub xi_count: Interval,
    pub xi_series: Interval,
    pub omega_inf: Interval,
    pub alpha: Rat,
    pub euler: Interval,
}

impl AssemblyInputs {
    pub fn compute(tolerance: f64, pmax: u64) -> Result<Self> {
        let xi = xi_constant(pmax);
        Ok(Self {
            zeta2: zeta2_interval(),
            xi_count: xi,
            xi_series: xi,
            omega_inf: omega_infty(tolerance)?,
            alpha: alpha_weyl(),
            euler: euler_product(pmax)?,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AssemblyReport {
    /// `ζ(2)^{-1} Ξ (ω∞/3) · 3α · ζ(2) Ξ^{-1} ∏(1 − 1/p)⁷ ω_p`.
    pub lhs: Interval,
    /// `α ω∞ ∏(1 − 1/p)⁷ ω_p`.
    pub rhs: Interval,
    pub relative_gap: f64,
    pub holds: bool,
}

pub fn constant_assembly(inp: &AssemblyInputs, tolerance: f64) -> AssemblyReport {
    let alpha = rat_interval(&inp.alpha);
    let three_alpha = rat_interval(&(inp.alpha.clone() * BigInt::from(3)));
    let front = recip(inp.zeta2) * inp.xi_count * inp.omega_inf.scale(1.0 / 3.0).pad_ulps(1);
    let series = inp.zeta2 * recip(inp.xi_series) * inp.euler;
    let lhs = front * three_alpha * series;
    let rhs = alpha * inp.omega_inf * inp.euler;
    let mid = |z: Interval| z.mid();
    let lhs_mid = (1.0 / mid(inp.zeta2)) * mid(inp.xi_count) * (mid(inp.omega_inf) / 3.0)
        * (3.0 * inp.alpha.to_f64().unwrap())
        * (mid(inp.zeta2) / mid(inp.xi_series) * mid(inp.euler));
    let rhs_mid = inp.alpha.to_f64().unwrap() * mid(inp.omega_inf) * mid(inp.euler);
    let relative_gap = (lhs_mid / rhs_mid - 1.0).abs();
    AssemblyReport { lhs, rhs, relative_gap, holds: relative_gap <= tolerance && lhs.intersects(&rhs) }
}

/// The identity holds and its right side agrees with the Peyre constant.
pub fn constant_assembly_check(tolerance: f64) -> Result<bool> {
    let inp = AssemblyInputs::compute(1e-6, 100_000)?;
    let report = constant_assembly(&inp, tolerance);
    let c = c_vh(1e-6, 100_000)?;
    Ok(report.holds && report.rhs.intersects(&c.c_vh) && alpha_polytope() == inp.alpha)
}
