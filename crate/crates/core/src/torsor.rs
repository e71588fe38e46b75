//! The universal torsor `η1η6η8 + η3η5η7² + η9η10 = 0`: the gcd cascade from
//! points of `U` to integral torsor points, its monomial inverse, the seven
//! coprimality conditions, the four height monomials and an independent
//! torsor-side count of `N(B)`.

use crate::arith::{gcd_i64, sieve};
use crate::surface::{f_eval, CountMethod, CountResult, ProjPoint};
use crate::{Error, Result};
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::time::Instant;

/// `(η1, …, η10)`; `eta(i)` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorsorTuple(pub [i64; 10]);

impl TorsorTuple {
    pub fn eta(&self, i: usize) -> i64 {
        self.0[i - 1]
    }

    /// `η1η6η8 + η3η5η7² + η9η10`.
    pub fn equation(&self) -> i128 {
        let e = |i| self.eta(i) as i128;
        e(1) * e(6) * e(8) + e(3) * e(5) * e(7) * e(7) + e(9) * e(10)
    }
}

impl fmt::Display for TorsorTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GcdCondition {
    Gcd1,
    Gcd2,
    Gcd3,
    Gcd4,
    Gcd5,
    Gcd6,
    Gcd7,
}

impl fmt::Display for GcdCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = *self as usize + 1;
        write!(f, "gcd{n}")
    }
}

fn coprime_to_all(a: i64, others: &[i64]) -> bool {
    others.iter().all(|&b| gcd_i64(a, b) == 1)
}

/// The violated conditions among
/// gcd1: `(η9, η1η2η3η5η6η7η8)`, gcd2: `(η1, η2η3η4η5η7η10)`,
/// gcd3: `(η6, η2η3η5η7η10)`, gcd4: `(η8, η3η4η5η6η7η10)`,
/// gcd5: `(η7, η2η4η10)`, gcd6: `(η2η3, η4η5)`, gcd7: `(η10, η3η4η5)`.
pub fn check_coprimality(t: &TorsorTuple) -> Vec<GcdCondition> {
    let e = |i| t.eta(i);
    let mut out = Vec::new();
    let checks: [(GcdCondition, bool); 7] = [
        (GcdCondition::Gcd1, coprime_to_all(e(9), &[e(1), e(2), e(3), e(5), e(6), e(7), e(8)])),
        (GcdCondition::Gcd2, coprime_to_all(e(1), &[e(2), e(3), e(4), e(5), e(7), e(10)])),
        (GcdCondition::Gcd3, coprime_to_all(e(6), &[e(2), e(3), e(5), e(7), e(10)])),
        (GcdCondition::Gcd4, coprime_to_all(e(8), &[e(3), e(4), e(5), e(6), e(7), e(10)])),
        (GcdCondition::Gcd5, coprime_to_all(e(7), &[e(2), e(4), e(10)])),
        (GcdCondition::Gcd6, coprime_to_all(e(2), &[e(4), e(5)]) && coprime_to_all(e(3), &[e(4), e(5)])),
        (GcdCondition::Gcd7, coprime_to_all(e(10), &[e(3), e(4), e(5)])),
    ];
    for (c, ok) in checks {
        if !ok {
            out.push(c);
        }
    }
    out
}

/// `[η1η4²η5η6²|η9|, η2η3²η4η5²η7³, η1η2²η3η8²|η10|, η1η2η3η4η5η6η7|η8|]`,
/// which are `|x0|, x1, |x2|, |x3|` of the image point. Saturates at `u128::MAX`.
pub fn height_monomials(t: &TorsorTuple) -> [u128; 4] {
    let a = |i: usize| t.eta(i).unsigned_abs() as u128;
    let prod = |xs: &[(usize, u32)]| {
        xs.iter()
            .try_fold(1u128, |acc, &(i, k)| acc.checked_mul(a(i).checked_pow(k)?))
            .unwrap_or(u128::MAX)
    };
    [
        prod(&[(1, 1), (4, 2), (5, 1), (6, 2), (9, 1)]),
        prod(&[(2, 1), (3, 2), (4, 1), (5, 2), (7, 3)]),
        prod(&[(1, 1), (2, 2), (3, 1), (8, 2), (10, 1)]),
        prod(&[(1, 1), (2, 1), (3, 1), (4, 1), (5, 1), (6, 1), (7, 1), (8, 1)]),
    ]
}

/// All four height monomials are `≤ b`; `None` stands for `b = ∞`.
pub fn check_heights(t: &TorsorTuple, b: Option<u64>) -> bool {
    match b {
        None => true,
        Some(b) => height_monomials(t).iter().all(|&m| m <= b as u128),
    }
}

fn invariant(t: [i64; 10], reason: impl Into<String>) -> Error {
    Error::TorsorInvariant { tuple: t, reason: reason.into() }
}

/// Sign, equation and coprimality invariants of a torsor tuple.
pub fn validate(t: &TorsorTuple) -> Result<()> {
    if (1..=7).any(|i| t.eta(i) <= 0) {
        return Err(invariant(t.0, "η1..η7 must be positive"));
    }
    if (8..=10).any(|i| t.eta(i) == 0) {
        return Err(invariant(t.0, "η8, η9, η10 must be nonzero"));
    }
    if t.equation() != 0 {
        return Err(invariant(t.0, "torsor equation fails"));
    }
    let bad = check_coprimality(t);
    if !bad.is_empty() {
        let tags: Vec<String> = bad.iter().map(|c| c.to_string()).collect();
        return Err(invariant(t.0, format!("violates {}", tags.join(", "))));
    }
    Ok(())
}

fn exact_div(a: i64, b: i64, what: &str, p: &ProjPoint) -> Result<i64> {
    if b == 0 || a % b != 0 {
        return Err(Error::InvalidArgument(format!("gcd cascade for {p}: {what} is not divisible")));
    }
    Ok(a / b)
}

/// Run the gcd cascade on a point of `U`.
///
/// The sign of `η8` is taken to be the sign of `x3''` so that `η7 > 0`.
pub fn to_torsor(p: &ProjPoint) -> Result<TorsorTuple> {
    if f_eval(&p.0) != 0 {
        return Err(Error::NotOnSurface(p.0));
    }
    if p.0.contains(&0) {
        return Err(Error::OnLine(p.0));
    }
    if p.0[1] < 0 || !p.is_primitive() {
        return Err(Error::InvalidArgument(format!("{p} is not a normalized primitive representative")));
    }
    let [x0, x1, x2, x3] = p.0;
    let g = |a: i64, b: i64| gcd_i64(a, b) as i64;
    let eta1 = g(g(x0, x2), x3);
    let y0 = g(g(x1, x2), x3);
    let y2 = g(g(x0, x1), x3);
    let x0p = exact_div(x0, eta1 * y2, "x0", p)?;
    let x1p = exact_div(x1, y0 * y2, "x1", p)?;
    let x2p = exact_div(x2, eta1 * y0, "x2", p)?;
    let x3p = exact_div(x3, eta1 * y0 * y2, "x3", p)?;

    let eta2 = g(y0, x2p);
    let eta3 = y0 / eta2;
    let x2pp = x2p / eta2;
    let x1pp = exact_div(x1p, eta3, "x1'", p)?;

    let eta4 = g(y2, x0p);
    let eta5 = y2 / eta4;
    let x0pp = x0p / eta4;
    let z1 = exact_div(x1pp, eta5, "x1''", p)?;

    let eta6 = g(x0pp, x3p);
    let eta9 = exact_div(x0pp, eta6 * eta6, "x0''", p)?;
    let x3pp = x3p / eta6;

    let eta8 = g(x2pp, x3pp) * x3pp.signum();
    let eta7 = x3pp / eta8;
    let eta10 = exact_div(x2pp, eta8 * eta8, "x2''", p)?;

    if z1 != eta7 * eta7 * eta7 {
        return Err(Error::InvalidArgument(format!("gcd cascade for {p}: z1 = {z1} differs from η7³")));
    }
    let t = TorsorTuple([eta1, eta2, eta3, eta4, eta5, eta6, eta7, eta8, eta9, eta10]);
    validate(&t)?;
    Ok(t)
}

/// `x0 = η1η4²η5η6²η9`, `x1 = η2η3²η4η5²η7³`, `x2 = η1η2²η3η8²η10`,
/// `x3 = η1⋯η8`. The image is not re-divided; a non-primitive image is an
/// error.
pub fn from_torsor(t: &TorsorTuple) -> Result<ProjPoint> {
    validate(t)?;
    let [m0, m1, m2, m3] = height_monomials(t);
    if [m0, m1, m2, m3].iter().any(|&m| m >= (1u128 << 62)) {
        return Err(Error::Overflow("from_torsor"));
    }
    let p = ProjPoint::new(
        m0 as i64 * t.eta(9).signum(),
        m1 as i64,
        m2 as i64 * t.eta(10).signum(),
        m3 as i64 * t.eta(8).signum(),
    );
    if !p.is_primitive() {
        return Err(invariant(t.0, format!("image {p} is not primitive")));
    }
    debug_assert_eq!(f_eval(&p.0), 0);
    Ok(p)
}

/// Fold over every tuple of `𝒯(b)`, parallel over `(η2, η3)`.
///
/// `(η2, η3, η4, η5, η7)` run under the second height monomial; `(η1, η6, η8)`
/// under the fourth; `η9η10 = −n` with `n = η1η6η8 + η3η5η7²` is split by the
/// divisors of `|n|` that satisfy the first and third height conditions.
pub fn fold_tuples<T, I, F, R>(b: u64, init: I, visit: F, reduce: R) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(&mut T, TorsorTuple) + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    assert!(b < (1 << 31), "bound too large");
    let b = b as i64;
    let mut outer = Vec::new();
    for e2 in 1..=b {
        for e3 in 1.. {
            if e2 * e3 * e3 > b {
                break;
            }
            outer.push((e2, e3));
        }
    }
    let sv = sieve();
    outer
        .into_par_iter()
        .fold(&init, |mut acc, (e2, e3)| {
            let mut divs = Vec::new();
            let c23 = e2 * e3 * e3;
            for e4 in 1..=b / c23 {
                if e2.gcd(&e4) != 1 || e3.gcd(&e4) != 1 {
                    continue;
                }
                for e5 in 1.. {
                    let c2345 = c23 * e4 * e5 * e5;
                    if c2345 > b {
                        break;
                    }
                    if e2.gcd(&e5) != 1 || e3.gcd(&e5) != 1 {
                        continue;
                    }
                    for e7 in 1.. {
                        if c2345 * e7 * e7 * e7 > b {
                            break;
                        }
                        if !coprime_to_all(e7, &[e2, e4]) {
                            continue;
                        }
                        let p = e2 * e3 * e4 * e5 * e7;
                        let r = b / p;
                        let a = e3 * e5 * e7 * e7;
                        for e1 in 1..=r {
                            if !coprime_to_all(e1, &[e2, e3, e4, e5, e7]) {
                                continue;
                            }
                            // first and third monomials without η6, η9 / η8, η10
                            let h1 = e1 * e4 * e4 * e5;
                            let h3 = e1 * e2 * e2 * e3;
                            if h1 > b || h3 > b {
                                break;
                            }
                            for e6 in 1..=r / e1 {
                                let h1_6 = h1 * e6 * e6;
                                if h1_6 > b {
                                    break;
                                }
                                if !coprime_to_all(e6, &[e2, e3, e5, e7]) {
                                    continue;
                                }
                                let d1 = b / h1_6;
                                for e8a in 1..=r / (e1 * e6) {
                                    let h3_8 = h3 * e8a * e8a;
                                    if h3_8 > b {
                                        break;
                                    }
                                    if !coprime_to_all(e8a, &[e3, e4, e5, e6, e7]) {
                                        continue;
                                    }
                                    let d3 = b / h3_8;
                                    for e8 in [e8a, -e8a] {
                                        let n = e1 * e6 * e8 + a;
                                        if n == 0 {
                                            continue;
                                        }
                                        let na = n.unsigned_abs();
                                        // |η9| ≤ d1 and |η10| = |n|/|η9| ≤ d3
                                        let lo = na.div_ceil(d3 as u64);
                                        if lo > d1 as u64 {
                                            continue;
                                        }
                                        divs.clear();
                                        divs.extend(
                                            sv.factorize(na).divisors().into_iter().filter(|&d| d >= lo && d <= d1 as u64),
                                        );
                                        for &d in &divs {
                                            let d = d as i64;
                                            for e9 in [d, -d] {
                                                let e10 = -n / e9;
                                                let t = TorsorTuple([e1, e2, e3, e4, e5, e6, e7, e8, e9, e10]);
                                                if coprime_to_all(e9, &[e1, e2, e3, e5, e6, e7, e8])
                                                    && coprime_to_all(e1, &[e10])
                                                    && coprime_to_all(e6, &[e10])
                                                    && coprime_to_all(e8, &[e10])
                                                    && coprime_to_all(e7, &[e10])
                                                    && coprime_to_all(e10, &[e3, e4, e5])
                                                {
                                                    visit(&mut acc, t);
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
            acc
        })
        .reduce(&init, reduce)
}

pub fn count_torsor(b: u64) -> CountResult {
    let t = Instant::now();
    let count = fold_tuples(b, || 0u64, |c, _| *c += 1, |a, b| a + b);
    CountResult { bound: b, count, method: CountMethod::Torsor, elapsed: t.elapsed().as_secs_f64() }
}

/// `#𝒯(B')` for every `B' ≤ b` (entry `i` is `#𝒯(i)`), keyed by the largest
/// height monomial of each tuple.
pub fn count_torsor_cumulative(b: u64) -> Vec<u64> {
    let hist = fold_tuples(
        b,
        || vec![0u64; b as usize + 1],
        |h, t| {
            let m = height_monomials(&t).into_iter().max().unwrap_or(0);
            h[m as usize] += 1;
        },
        |mut a, c| {
            a.iter_mut().zip(c).for_each(|(x, y)| *x += y);
            a
        },
    );
    hist.iter()
        .scan(0u64, |s, &x| {
            *s += x;
            Some(*s)
        })
        .collect()
}

pub fn tuples(b: u64) -> Vec<TorsorTuple> {
    let mut v = fold_tuples(
        b,
        Vec::new,
        |v, t| v.push(t),
        |mut a, mut c| {
            a.append(&mut c);
            a
        },
    );
    v.sort();
    v
}

/// CSV rows `eta1..eta10,x0,x1,x2,x3`.
pub fn tuples_csv(ts: &[TorsorTuple]) -> Result<String> {
    let mut s = String::from("eta1,eta2,eta3,eta4,eta5,eta6,eta7,eta8,eta9,eta10,x0,x1,x2,x3\n");
    for t in ts {
        let p = from_torsor(t)?;
        let cells: Vec<String> = t.0.iter().chain(p.0.iter()).map(|x| x.to_string()).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    Ok(s)
}

/// Sizes of the subsets of `𝒯(B)` used to restrict the counting domain.
#[derive(Clone, Debug, Serialize)]
pub struct SubsetDiagnostics {
    pub bound: u64,
    pub a: f64,
    /// `log(B)^A`
    pub threshold: f64,
    pub total: u64,
    /// `|η9| = |η10|`
    pub equal_9_10: u64,
    /// `0 < η10 ≤ |η9|`, `η6 ≥ log(B)^A`, `|η8| ≥ log(B)^A`
    pub n_a: u64,
    /// entry `i-1`: tuples with `|η_i| ≤ log(B)^A`, `i = 1..8`
    pub small: [u64; 8],
    /// `total − 4·n_a`
    pub defect: i64,
    /// `defect / (B log(B)^5 log log B)`
    pub defect_ratio: f64,
    /// `equal_9_10 / (B log(B)^4)`
    pub equal_ratio: f64,
}

pub fn diagnostics_subsets(b: u64, a: f64) -> Result<SubsetDiagnostics> {
    if b < 3 {
        return Err(Error::InvalidArgument("diagnostics need B ≥ 3".into()));
    }
    let lb = (b as f64).ln();
    let thr = lb.powf(a);
    #[derive(Default)]
    struct Acc {
        total: u64,
        eq: u64,
        na: u64,
        small: [u64; 8],
    }
    let acc = fold_tuples(
        b,
        Acc::default,
        |acc, t| {
            acc.total += 1;
            if t.eta(9).abs() == t.eta(10).abs() {
                acc.eq += 1;
            }
            let sym = t.eta(10) > 0 && t.eta(10) <= t.eta(9).abs();
            if sym && t.eta(6) as f64 >= thr && t.eta(8).abs() as f64 >= thr {
                acc.na += 1;
            }
            for i in 1..=8 {
                if (t.eta(i).abs() as f64) <= thr {
                    acc.small[i - 1] += 1;
                }
            }
        },
        |mut x, y| {
            x.total += y.total;
            x.eq += y.eq;
            x.na += y.na;
            for i in 0..8 {
                x.small[i] += y.small[i];
            }
            x
        },
    );
    let bf = b as f64;
    let defect = acc.total as i64 - 4 * acc.na as i64;
    Ok(SubsetDiagnostics {
        bound: b,
        a,
        threshold: thr,
        total: acc.total,
        equal_9_10: acc.eq,
        n_a: acc.na,
        small: acc.small,
        defect,
        defect_ratio: defect as f64 / (bf * lb.powi(5) * lb.ln()),
        equal_ratio: acc.eq as f64 / (bf * lb.powi(4)),
    })
}
