//! The cubic surface `x3²(x1 + x3) + x0x1x2 = 0`, its lines and singular
//! points, and two independent counts of
//! `N(B) = #{x ∈ U(Q) : H(x) ≤ B}` where `U` is the complement of the lines.
//!
//! Representatives are primitive integer quadruples normalized by `x1 > 0`.
//! Coordinates are `i64`; the cubic form is evaluated in `i128`, which is
//! exact for `|x_i| < 2^41`.

use crate::arith::{gcd_i64, sieve};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::time::Instant;

const COORD_LIMIT: i64 = 1 << 41;

/// A primitive integer quadruple `(x0, x1, x2, x3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPoint(pub [i64; 4]);

impl ProjPoint {
    pub fn new(x0: i64, x1: i64, x2: i64, x3: i64) -> Self {
        Self([x0, x1, x2, x3])
    }

    pub fn coords(&self) -> [i64; 4] {
        self.0
    }

    pub fn is_primitive(&self) -> bool {
        let [a, b, c, d] = self.0;
        gcd_i64(gcd_i64(a, b) as i64, gcd_i64(c, d) as i64) == 1
    }

    pub fn on_surface(&self) -> bool {
        f_eval(&self.0) == 0
    }

    /// Membership in the counted set: on `V`, primitive, `x1 > 0`, no zero
    /// coordinate.
    pub fn in_u(&self) -> bool {
        self.on_surface() && self.is_primitive() && self.0[1] > 0 && self.0.iter().all(|&x| x != 0)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a}:{b}:{c}:{d})")
    }
}

/// `x3²(x1 + x3) + x0x1x2`.
pub fn f_eval(p: &[i64; 4]) -> i128 {
    assert!(p.iter().all(|x| x.abs() < COORD_LIMIT), "coordinates too large for exact evaluation");
    let [x0, x1, x2, x3] = p.map(|x| x as i128);
    x3 * x3 * (x1 + x3) + x0 * x1 * x2
}

/// The four partial derivatives of the cubic form.
pub fn gradient(p: &[i64; 4]) -> [i128; 4] {
    let [x0, x1, x2, x3] = p.map(|x| x as i128);
    [x1 * x2, x3 * x3 + x0 * x2, x0 * x1, 3 * x3 * x3 + 2 * x1 * x3]
}

pub fn height(p: &ProjPoint) -> u64 {
    p.0.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
}

/// Whether a point of `V` lies on one of its lines, i.e. has a zero coordinate.
pub fn on_line(p: &ProjPoint) -> Result<bool> {
    if !p.on_surface() {
        return Err(Error::NotOnSurface(p.0));
    }
    Ok(p.0.contains(&0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SingularityType {
    A1,
    A2,
}

pub fn singular_points() -> Vec<(ProjPoint, SingularityType)> {
    vec![
        (ProjPoint::new(0, 1, 0, 0), SingularityType::A1),
        (ProjPoint::new(1, 0, 0, 0), SingularityType::A2),
        (ProjPoint::new(0, 0, 1, 0), SingularityType::A2),
    ]
}

/// A line of `V` as the common zero set of two linear forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Line {
    pub forms: [[i64; 4]; 2],
}

impl Line {
    pub fn contains(&self, p: &[i64; 4]) -> bool {
        self.forms.iter().all(|f| f.iter().zip(p).map(|(a, b)| a * b).sum::<i64>() == 0)
    }
}

/// `{x_i = x_3 = 0}` for `i ∈ {0,1,2}` and `{x_j = x_1 + x_3 = 0}` for `j ∈ {0,2}`.
pub fn lines() -> Vec<Line> {
    let e = |i: usize| {
        let mut v = [0; 4];
        v[i] = 1;
        v
    };
    let mut out: Vec<Line> = (0..3).map(|i| Line { forms: [e(i), e(3)] }).collect();
    for j in [0, 2] {
        out.push(Line { forms: [e(j), [0, 1, 0, 1]] });
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Naive,
    Direct,
    Torsor,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountResult {
    pub bound: u64,
    pub count: u64,
    pub method: CountMethod,
    pub elapsed: f64,
}

pub const NAIVE_LIMIT: u64 = 60;

/// Points of `U` with height `≤ b` by scanning `(x1, x2, x3)` and solving for
/// `x0`. Reference oracle, `O(B³)`.
pub fn points_naive(b: u64) -> Result<Vec<ProjPoint>> {
    if b > NAIVE_LIMIT {
        return Err(Error::BudgetExceeded(format!("naive enumeration is limited to B ≤ {NAIVE_LIMIT}, got {b}")));
    }
    let b = b as i64;
    let mut out = Vec::new();
    for x1 in 1..=b {
        for x2 in (-b..=b).filter(|&v| v != 0) {
            for x3 in (-b..=b).filter(|&v| v != 0) {
                let num = -x3 * x3 * (x1 + x3);
                let den = x1 * x2;
                if num % den != 0 {
                    continue;
                }
                let x0 = num / den;
                if x0 == 0 || x0.abs() > b {
                    continue;
                }
                let p = ProjPoint::new(x0, x1, x2, x3);
                if p.is_primitive() {
                    out.push(p);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

pub fn count_naive(b: u64) -> Result<CountResult> {
    let t = Instant::now();
    let count = points_naive(b)?.len() as u64;
    Ok(CountResult { bound: b, count, method: CountMethod::Naive, elapsed: t.elapsed().as_secs_f64() })
}

/// Divisors `d` of `∏ p^e` with `lo ≤ d ≤ hi`.
fn bounded_divisors(pairs: &[(u64, u32)], lo: u64, hi: u64, out: &mut Vec<u64>) {
    fn rec(pairs: &[(u64, u32)], d: u64, lo: u64, hi: u64, out: &mut Vec<u64>) {
        match pairs.split_first() {
            None => {
                if d >= lo {
                    out.push(d);
                }
            }
            Some((&(p, e), rest)) => {
                let mut d = d;
                for k in 0..=e {
                    rec(rest, d, lo, hi, out);
                    if k == e {
                        break;
                    }
                    match d.checked_mul(p) {
                        Some(n) if n <= hi => d = n,
                        _ => break,
                    }
                }
            }
        }
    }
    out.clear();
    rec(pairs, 1, lo, hi, out);
}

/// Exponent vector of `x3²(x1+x3)/x1` from the factorizations of its parts.
fn quotient_factorization(x1: u64, x3: u64, s: u64, buf: &mut Vec<(u64, i32)>) {
    let sv = sieve();
    buf.clear();
    for (n, w) in [(x3, 2i32), (s, 1), (x1, -1)] {
        for &(p, e) in sv.factorize(n).pairs() {
            buf.push((p, w * e as i32));
        }
    }
    buf.sort_unstable_by_key(|&(p, _)| p);
    let mut merged: Vec<(u64, i32)> = Vec::with_capacity(buf.len());
    for &(p, e) in buf.iter() {
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    merged.retain(|&(_, e)| e != 0);
    debug_assert!(merged.iter().all(|&(_, e)| e > 0));
    *buf = merged;
}

/// Least `m > 0` with `x1 | m³`.
fn cube_root_modulus(x1: u64) -> u64 {
    sieve()
        .factorize(x1)
        .pairs()
        .iter()
        .map(|&(p, e)| p.pow(e.div_ceil(3)))
        .product()
}

/// Fold over every point of `U` with height `≤ b`, parallel in `x1`.
///
/// For each `(x1, x3)` with `x1 | x3³` the product `x0x2 = −x3²(x1+x3)/x1` is
/// fixed; its factorization is assembled from those of `x3`, `x1 + x3` and
/// `x1` (all `≤ 2B`, so sieve lookups), and the divisor pairs with both
/// factors `≤ B` are the candidate `(x0, x2)`.
pub fn fold_points_direct<T, I, F, R>(b: u64, init: I, visit: F, reduce: R) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(&mut T, ProjPoint) + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    assert!(b < (1 << 40), "bound too large");
    let bi = b as i64;
    let b2 = (b as u128) * (b as u128);
    (1..=bi)
        .into_par_iter()
        .fold(&init, |mut acc, x1| {
            let m = cube_root_modulus(x1 as u64) as i64;
            let mut fac = Vec::new();
            let mut divs = Vec::new();
            let mut x3 = m;
            while x3 <= bi {
                for x3s in [x3, -x3] {
                    let s = x1 + x3s;
                    if s == 0 {
                        continue;
                    }
                    let x3a = x3s.unsigned_abs() as u128;
                    let mag = x3a * x3a * s.unsigned_abs() as u128 / x1 as u128;
                    if mag > b2 {
                        continue;
                    }
                    let mag = mag as u64;
                    // sign of x0x2 is −sign(x1 + x3)
                    let negative = s > 0;
                    quotient_factorization(x1 as u64, x3s.unsigned_abs(), s.unsigned_abs(), &mut fac);
                    let pairs: Vec<(u64, u32)> = fac.iter().map(|&(p, e)| (p, e as u32)).collect();
                    bounded_divisors(&pairs, mag.div_ceil(b), b, &mut divs);
                    let g13 = gcd_i64(x1, x3s) as i64;
                    for &d in &divs {
                        let e = (mag / d) as i64;
                        let d = d as i64;
                        for x0 in [d, -d] {
                            let x2 = if negative == (x0 > 0) { -e } else { e };
                            if g13 != 1 && gcd_i64(g13, gcd_i64(x0, x2) as i64) != 1 {
                                continue;
                            }
                            visit(&mut acc, ProjPoint::new(x0, x1, x2, x3s));
                        }
                    }
                }
                x3 += m;
            }
            acc
        })
        .reduce(&init, reduce)
}

pub fn count_direct(b: u64) -> CountResult {
    let t = Instant::now();
    let count = fold_points_direct(b, || 0u64, |c, _| *c += 1, |a, b| a + b);
    CountResult { bound: b, count, method: CountMethod::Direct, elapsed: t.elapsed().as_secs_f64() }
}

/// `N(B')` for every `B' ≤ b` from one enumeration: entry `i` is `N(i)`.
pub fn count_direct_cumulative(b: u64) -> Vec<u64> {
    let hist = fold_points_direct(
        b,
        || vec![0u64; b as usize + 1],
        |h, p| h[height(&p) as usize] += 1,
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

/// Sorted list of the points of `U` with height `≤ b` (audit mode).
pub fn points_direct(b: u64) -> Vec<ProjPoint> {
    let mut v = fold_points_direct(
        b,
        Vec::new,
        |v, p| v.push(p),
        |mut a, mut c| {
            a.append(&mut c);
            a
        },
    );
    v.sort();
    v
}

/// Audit-mode CSV: header plus `x0,x1,x2,x3` rows in lexicographic order.
pub fn points_csv(points: &[ProjPoint]) -> String {
    let mut s = String::from("x0,x1,x2,x3\n");
    for p in points {
        let [a, b, c, d] = p.0;
        s.push_str(&format!("{a},{b},{c},{d}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn evaluation_examples() {
        assert_eq!(f_eval(&[1, 1, -2, 1]), 0);
        assert_eq!(f_eval(&[1, 0, 0, 0]), 0);
        assert_eq!(f_eval(&[1, 1, 1, 1]), 3);
        assert_eq!(height(&ProjPoint::new(1, 1, -2, 1)), 2);
        assert_eq!(height(&ProjPoint::new(0, 1, 0, 0)), 1);
        assert_eq!(height(&ProjPoint::new(3, 1, -4, 2)), 4);
    }

    #[test]
    fn line_membership() {
        assert!(on_line(&ProjPoint::new(0, 1, 0, 0)).unwrap());
        assert!(!on_line(&ProjPoint::new(1, 1, -2, 1)).unwrap());
        assert!(on_line(&ProjPoint::new(1, 0, 0, 0)).unwrap());
        assert!(matches!(on_line(&ProjPoint::new(1, 1, 1, 1)), Err(Error::NotOnSurface(_))));
    }

    #[test]
    fn singularities() {
        let s = singular_points();
        assert_eq!(s.len(), 3);
        assert!(s.contains(&(ProjPoint::new(0, 1, 0, 0), SingularityType::A1)));
        for (p, _) in &s {
            assert_eq!(f_eval(&p.0), 0);
            assert_eq!(gradient(&p.0), [0; 4]);
        }
        // a smooth point of V has a nonzero gradient
        assert_ne!(gradient(&[1, 1, -2, 1]), [0; 4]);
    }

    #[test]
    fn five_lines_lie_on_v() {
        let ls = lines();
        assert_eq!(ls.len(), 5);
        let samples = [[0, 3, -7, 0], [5, 0, 2, 0], [4, -1, 0, 0], [0, 1, 5, -1], [6, 2, 0, -2]];
        for (l, x) in ls.iter().zip(samples) {
            assert!(l.contains(&x));
            for k in [-3i64, 1, 7] {
                let y = x.map(|c| c * k);
                assert!(l.contains(&y));
                assert_eq!(f_eval(&y), 0);
            }
        }
    }

    #[test]
    fn tiny_bounds() {
        assert_eq!(count_naive(1).unwrap().count, 0);
        assert_eq!(count_direct(1).count, 0);
        let p2 = points_naive(2).unwrap();
        assert!(p2.contains(&ProjPoint::new(1, 1, -2, 1)));
        assert_eq!(count_direct(2).count, p2.len() as u64);
        assert!(count_naive(61).is_err());
    }

    #[test]
    fn naive_equals_direct_up_to_forty() {
        let cum = count_direct_cumulative(40);
        for b in 1..=40u64 {
            assert_eq!(cum[b as usize], count_naive(b).unwrap().count, "B = {b}");
        }
        assert_eq!(points_direct(40), points_naive(40).unwrap());
    }

    #[test]
    fn audited_points_are_valid_and_distinct() {
        let pts = points_direct(100);
        for p in &pts {
            assert!(p.in_u(), "{p}");
            assert!(height(p) <= 100);
        }
        let mut d = pts.clone();
        d.dedup();
        assert_eq!(d.len(), pts.len());
    }

    #[test]
    fn csv_is_sorted_with_header() {
        let csv = points_csv(&points_direct(3));
        assert!(csv.starts_with("x0,x1,x2,x3\n"));
        assert!(!csv.contains('\r'));
    }

    proptest! {
        #[test]
        fn counts_are_monotone(b1 in 1u64..150, extra in 0u64..50) {
            prop_assert!(count_direct(b1).count <= count_direct(b1 + extra).count);
        }

        #[test]
        fn cumulative_matches_single_runs(b in 1u64..120) {
            let cum = count_direct_cumulative(120);
            prop_assert_eq!(cum[b as usize], count_direct(b).count);
        }
    }
}
