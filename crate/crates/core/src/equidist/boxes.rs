//! Boxes `I × J × K` and the counts `N`, `N*`, `N_b`, `N_b*` over them.

use crate::arith::{euler_phi, factorize, gcd_i64, mobius};
use crate::{Error, Result, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// A real interval not containing 0, with its integer points `first..=last`.
///
/// `]U, ζU]` for `U > 0` and `[ζU, U[` for `U < 0`; arbitrary nonzero
/// endpoints are allowed, only the orientation rule is fixed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Range1 {
    pub lo: f64,
    pub hi: f64,
}

impl Range1 {
    /// `]lo, hi]` if positive, `[lo, hi[` if negative.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) || (lo < 0.0 && hi > 0.0) {
            return Err(Error::InvalidArgument(format!("range [{lo}, {hi}] is empty or contains 0")));
        }
        Ok(Self { lo, hi })
    }

    /// The cell attached to a grid variable `U`: `]U, ζU]` or `[ζU, U[`.
    pub fn cell(u: f64, zeta: f64) -> Result<Self> {
        if u > 0.0 {
            Self::new(u, zeta * u)
        } else {
            Self::new(zeta * u, u)
        }
    }

    pub fn positive(&self) -> bool {
        self.lo >= 0.0
    }

    /// Integer points as an inclusive range (possibly empty: `first > last`).
    pub fn int_range(&self) -> (i64, i64) {
        if self.positive() {
            (self.lo.floor() as i64 + 1, self.hi.floor() as i64)
        } else {
            (self.lo.ceil() as i64, self.hi.ceil() as i64 - 1)
        }
    }

    pub fn len(&self) -> u64 {
        let (a, b) = self.int_range();
        (b - a + 1).max(0) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_abs(&self) -> u64 {
        self.lo.abs().max(self.hi.abs()).floor() as u64
    }
}

/// Integer points `t` with `m·t` an integer point of `r`.
fn scaled_range(r: &Range1, m: i64) -> (i64, i64) {
    let (a, b) = r.int_range();
    (Integer::div_ceil(&a, &m), Integer::div_floor(&b, &m))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Box3 {
    pub i: Range1,
    pub j: Range1,
    pub k: Range1,
}

impl Box3 {
    pub fn new(i: Range1, j: Range1, k: Range1) -> Self {
        Self { i, j, k }
    }

    /// `]lo, hi]³`.
    pub fn cube(lo: f64, hi: f64) -> Result<Self> {
        let r = Range1::new(lo, hi)?;
        Ok(Self { i: r, j: r, k: r })
    }

    pub fn lattice_count(&self) -> u64 {
        self.i.len() * self.j.len() * self.k.len()
    }
}

fn check_unit(q: u64, a: i64) -> Result<()> {
    if q == 0 || gcd_i64(a, q as i64) != 1 {
        return Err(Error::InvalidArgument(format!("a = {a} and q = {q} must be coprime")));
    }
    Ok(())
}

pub(crate) fn mod_inverse(x: i64, q: i64) -> Option<i64> {
    let e = x.rem_euclid(q).extended_gcd(&q);
    (e.gcd == 1).then(|| e.x.rem_euclid(q))
}

/// Residue histogram of the integers in `a..=b`.
fn residues(a: i64, b: i64, q: u64) -> Vec<u64> {
    let q = q as i64;
    let mut h = vec![0u64; q as usize];
    if a > b {
        return h;
    }
    let n = b - a + 1;
    let full = (n / q) as u64;
    h.iter_mut().for_each(|c| *c = full);
    let start = a.rem_euclid(q);
    for t in 0..n % q {
        h[((start + t) % q) as usize] += 1;
    }
    h
}

/// `#{(u,v,w) : uvw ≡ target (mod q)}` for three residue histograms.
fn product_class_count(hu: &[u64], hv: &[u64], hw: &[u64], q: u64, target: i64) -> u64 {
    let qi = q as i64;
    let mut total = 0u64;
    for (ru, &cu) in hu.iter().enumerate() {
        if cu == 0 {
            continue;
        }
        for (rv, &cv) in hv.iter().enumerate() {
            if cv == 0 {
                continue;
            }
            if let Some(inv) = mod_inverse(ru as i64 * rv as i64 % qi, qi) {
                let rw = (target.rem_euclid(qi) * inv) % qi;
                total += cu * cv * hw[rw as usize];
            }
        }
    }
    total
}

/// `N(I,J,K; q, a) = #{(u,v,w) ∈ I×J×K ∩ Z³ : uvw ≡ a (mod q)}`.
pub fn n_count(bx: &Box3, q: u64, a: i64) -> Result<u64> {
    check_unit(q, a)?;
    let (hu, hv, hw) = (
        residues(bx.i.int_range().0, bx.i.int_range().1, q),
        residues(bx.j.int_range().0, bx.j.int_range().1, q),
        residues(bx.k.int_range().0, bx.k.int_range().1, q),
    );
    Ok(product_class_count(&hu, &hv, &hw, q, a))
}

fn coprime_count(r: &Range1, q: u64) -> u64 {
    let (a, b) = r.int_range();
    (a..=b).filter(|&x| gcd_i64(x, q as i64) == 1).count() as u64
}

fn rat(n: u64, d: u64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// `N*(I,J,K; q) = #{gcd(uvw, q) = 1} / φ(q)`.
pub fn n_star(bx: &Box3, q: u64) -> Rat {
    let c = coprime_count(&bx.i, q) * coprime_count(&bx.j, q) * coprime_count(&bx.k, q);
    rat(c, euler_phi(q))
}

/// Residue histogram of `vw` over pairs with `gcd(v, bw) = 1`, restricted to
/// `gcd(vw, q) = 1` (other classes cannot meet a unit target).
fn restricted_vw_histogram(bx: &Box3, q: u64, b: u64) -> Vec<u64> {
    let qi = q as i64;
    let mut h = vec![0u64; q as usize];
    let (v0, v1) = bx.j.int_range();
    let (w0, w1) = bx.k.int_range();
    for v in v0..=v1 {
        if gcd_i64(v, b as i64) != 1 || gcd_i64(v, qi) != 1 {
            continue;
        }
        for w in w0..=w1 {
            if gcd_i64(v, w) == 1 && gcd_i64(w, qi) == 1 {
                h[(v * w).rem_euclid(qi) as usize] += 1;
            }
        }
    }
    h
}

/// `N_b(I,J,K; q, a)`: the count `N` with the extra condition `gcd(v, bw) = 1`.
pub fn n_b_count(bx: &Box3, q: u64, a: i64, b: u64) -> Result<u64> {
    check_unit(q, a)?;
    let qi = q as i64;
    let hvw = restricted_vw_histogram(bx, q, b);
    let (u0, u1) = bx.i.int_range();
    let hu = residues(u0, u1, q);
    let mut total = 0;
    for (r, &c) in hvw.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let inv = mod_inverse(r as i64, qi).expect("unit class");
        total += c * hu[(a.rem_euclid(qi) * inv % qi) as usize];
    }
    Ok(total)
}

/// `N_b*(I,J,K; q) = #{gcd(v, bw) = 1, gcd(uvw, q) = 1} / φ(q)`.
pub fn n_b_star(bx: &Box3, q: u64, b: u64) -> Rat {
    let pairs: u64 = restricted_vw_histogram(bx, q, b).iter().sum();
    rat(coprime_count(&bx.i, q) * pairs, euler_phi(q))
}

/// `N_b` through the double Möbius expansion
/// `Σ_{k ≥ 1, ℓ | b, gcd(k,b) = 1, gcd(kℓ,q) = 1} μ(k)μ(ℓ) N(I, J_{kℓ}, K_k; q, k⁻²ℓ⁻¹a)`
/// with `J_m = {t : mt ∈ J}`. The sum over `k` is finite: `K_k` and `J_k`
/// contain no integer once `k` exceeds `min(max|v|, max|w|)`.
pub fn mobius_expand_nb(bx: &Box3, q: u64, a: i64, b: u64) -> Result<i64> {
    check_unit(q, a)?;
    let qi = q as i64;
    let (u0, u1) = bx.i.int_range();
    let hu = residues(u0, u1, q);
    let kmax = bx.j.max_abs().min(bx.k.max_abs()) as i64;
    let mut ells: Vec<i64> = factorize(b).divisors().into_iter().map(|d| d as i64).collect();
    ells.sort();
    let mut total: i64 = 0;
    for k in 1..=kmax {
        let mk = mobius(k as u64) as i64;
        if mk == 0 || gcd_i64(k, b as i64) != 1 || gcd_i64(k, qi) != 1 {
            continue;
        }
        let (w0, w1) = scaled_range(&bx.k, k);
        if w0 > w1 {
            continue;
        }
        let hw = residues(w0, w1, q);
        for &l in &ells {
            let ml = mobius(l as u64) as i64;
            if ml == 0 || gcd_i64(l, qi) != 1 {
                continue;
            }
            let (v0, v1) = scaled_range(&bx.j, k * l);
            if v0 > v1 {
                continue;
            }
            let hv = residues(v0, v1, q);
            let k2l_inv = mod_inverse((k * k % qi) * l % qi, qi).expect("kℓ is a unit");
            let target = a.rem_euclid(qi) * k2l_inv % qi;
            total += mk * ml * product_class_count(&hu, &hv, &hw, q, target) as i64;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(bx: &Box3, q: u64, a: i64, b: Option<u64>) -> u64 {
        let (u0, u1) = bx.i.int_range();
        let (v0, v1) = bx.j.int_range();
        let (w0, w1) = bx.k.int_range();
        let mut c = 0;
        for u in u0..=u1 {
            for v in v0..=v1 {
                for w in w0..=w1 {
                    if let Some(b) = b {
                        if gcd_i64(v, b as i64 * w) != 1 {
                            continue;
                        }
                    }
                    if (u * v * w - a).rem_euclid(q as i64) == 0 {
                        c += 1;
                    }
                }
            }
        }
        c
    }

    #[test]
    fn unit_cube_examples() {
        let bx = Box3::cube(1.0, 2.0).unwrap();
        assert_eq!(bx.lattice_count(), 1);
        assert_eq!(n_count(&bx, 3, 2).unwrap(), 1);
        assert_eq!(n_count(&bx, 5, 2).unwrap(), 0);
        assert_eq!(n_count(&bx, 1, 0).unwrap(), 1);
        assert_eq!(n_star(&bx, 3), rat(1, 2));
        assert_eq!(n_b_count(&bx, 3, 2, 2).unwrap(), 0);
        assert_eq!(n_b_count(&bx, 3, 2, 1).unwrap(), 0);
        assert_eq!(mobius_expand_nb(&bx, 3, 2, 1).unwrap(), 0);
        assert!(n_count(&bx, 6, 3).is_err());
    }

    #[test]
    fn orientation_of_negative_cells() {
        let r = Range1::cell(-2.0, 2.0).unwrap();
        assert_eq!((r.lo, r.hi), (-4.0, -2.0));
        assert_eq!(r.int_range(), (-4, -3));
        let p = Range1::cell(2.0, 2.0).unwrap();
        assert_eq!(p.int_range(), (3, 4));
        assert!(Range1::new(-1.0, 1.0).is_err());
    }

    #[test]
    fn expansion_needs_k_beyond_one_on_small_boxes() {
        // in ]1,2]×]1,4]×]1,4] the pair (v,w) = (2,2) is removed by k = 2
        let bx = Box3::new(Range1::new(1.0, 2.0).unwrap(), Range1::new(1.0, 4.0).unwrap(), Range1::new(1.0, 4.0).unwrap());
        let full = n_b_count(&bx, 1, 0, 1).unwrap() as i64;
        assert_eq!(mobius_expand_nb(&bx, 1, 0, 1).unwrap(), full);
        assert_eq!(full, 4);
    }

    #[test]
    fn q_one_is_full_count() {
        let bx = Box3::new(Range1::new(-7.5, -2.0).unwrap(), Range1::new(0.5, 6.0).unwrap(), Range1::new(3.0, 9.0).unwrap());
        assert_eq!(n_count(&bx, 1, 0).unwrap(), bx.lattice_count());
        assert_eq!(n_star(&bx, 1), rat(bx.lattice_count(), 1));
    }

    fn arb_range() -> impl Strategy<Value = Range1> {
        (1i64..=50, 1i64..=50, any::<bool>()).prop_map(|(x, y, neg)| {
            let (a, b) = (x.min(y) as f64 - 0.5, x.max(y) as f64);
            if neg {
                Range1::new(-b, -a).unwrap()
            } else {
                Range1::new(a, b).unwrap()
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn counts_match_brute_force(i in arb_range(), j in arb_range(), k in arb_range(), q in 1u64..=30, a in 0i64..30, b in 1u64..=12) {
            let bx = Box3::new(i, j, k);
            prop_assume!(gcd_i64(a, q as i64) == 1);
            prop_assert_eq!(n_count(&bx, q, a).unwrap(), brute(&bx, q, a, None));
            let nb = n_b_count(&bx, q, a, b).unwrap();
            prop_assert_eq!(nb, brute(&bx, q, a, Some(b)));
            prop_assert_eq!(mobius_expand_nb(&bx, q, a, b).unwrap(), nb as i64);
        }

        #[test]
        fn residue_partition(i in arb_range(), j in arb_range(), k in arb_range(), q in 1u64..=30) {
            let bx = Box3::new(i, j, k);
            let total: u64 = (0..q as i64).filter(|&a| gcd_i64(a, q as i64) == 1).map(|a| n_count(&bx, q, a).unwrap()).sum();
            prop_assert_eq!(rat(total, 1), n_star(&bx, q) * rat(euler_phi(q), 1));
            let total_b: u64 = (0..q as i64).filter(|&a| gcd_i64(a, q as i64) == 1).map(|a| n_b_count(&bx, q, a, 6).unwrap()).sum();
            prop_assert_eq!(rat(total_b, 1), n_b_star(&bx, q, 6) * rat(euler_phi(q), 1));
        }
    }
}
