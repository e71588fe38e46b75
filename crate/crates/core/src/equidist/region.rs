//! The region `S(X, X1, X2, T, Z, L1, L2) ⊂ R≥0² × R` and lattice counts
//! over it.

use super::boxes::{Box3, Range1};
use super::GeomGrid;
use crate::arith::{euler_phi, gcd_i64};
use crate::{Error, Rat, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// Regions whose scan would visit more lattice points than this are rejected.
pub const SCAN_LIMIT: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionS {
    pub x: f64,
    pub x1: f64,
    pub x2: f64,
    pub t: f64,
    pub z: f64,
    pub l1: f64,
    pub l2: f64,
}

impl RegionS {
    /// The experiment template: `X1 = X²`, `X2 = X`, `T = X/2`, `Z = L1 = L2 = 1`.
    pub fn template(x: f64) -> Self {
        Self { x, x1: x * x, x2: x, t: x / 2.0, z: 1.0, l1: 1.0, l2: 1.0 }
    }
}

/// Conditions (A)–(F):
/// `xy²|xyz + T| ≤ X1`, `xz² ≤ X2`, `xy|z| ≤ X`, `Z ≤ |xyz + T|`, `L1 ≤ y`,
/// `L2 ≤ |z|`.
pub fn s_member(s: &RegionS, x: f64, y: f64, z: f64) -> bool {
    let m = (x * y * z + s.t).abs();
    x * y * y * m <= s.x1 && x * z * z <= s.x2 && x * y * z.abs() <= s.x && s.z <= m && s.l1 <= y && s.l2 <= z.abs()
}

/// Iterate the lattice points of `S` with `u ≥ 1` (the `u = 0` plane is
/// unbounded in `S`), after checking the scan size against [`SCAN_LIMIT`].
fn scan(s: &RegionS, mut visit: impl FnMut(i64, i64, i64)) -> Result<()> {
    if !(s.l1 > 0.0 && s.l2 > 0.0) {
        return Err(Error::UnboundedRegion("L1 and L2 must be positive".into()));
    }
    let vmin = s.l1.ceil().max(1.0) as i64;
    let wmin = s.l2.ceil().max(1.0) as i64;
    let wbound = |u: i64, v: i64| -> i64 {
        let by_c = s.x / (u as f64 * v as f64);
        let by_b = (s.x2 / u as f64).sqrt();
        by_c.min(by_b).floor() as i64
    };
    let umax = (s.x / (vmin as f64 * wmin as f64)).floor() as i64;
    let mut budget = 0u64;
    for u in 1..=umax {
        budget += 1;
        let vmax = (s.x / (u as f64 * wmin as f64)).floor() as i64;
        for v in vmin..=vmax {
            let wm = wbound(u, v);
            if wm < wmin {
                break;
            }
            budget += 2 * (wm - wmin + 1) as u64;
            if budget > SCAN_LIMIT {
                return Err(Error::BudgetExceeded(format!("region scan exceeds {SCAN_LIMIT} lattice points")));
            }
        }
    }
    for u in 1..=umax {
        let vmax = (s.x / (u as f64 * wmin as f64)).floor() as i64;
        for v in vmin..=vmax {
            let wm = wbound(u, v);
            if wm < wmin {
                break;
            }
            for wa in wmin..=wm {
                for w in [wa, -wa] {
                    if s_member(s, u as f64, v as f64, w as f64) {
                        visit(u, v, w);
                    }
                }
            }
        }
    }
    Ok(())
}

/// Residue classes of `uvw mod q` over `S ∩ Z³`, optionally restricted by
/// `gcd(v, bw) = 1`; one scan serves every `a`.
#[derive(Clone, Debug)]
pub struct RegionHistogram {
    pub q: u64,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl RegionHistogram {
    /// `D(S; q, a)` (or `D_b`).
    pub fn d(&self, a: i64) -> u64 {
        self.counts[a.rem_euclid(self.q as i64) as usize]
    }

    /// `D*(S; q)` (or `D_b*`).
    pub fn d_star(&self) -> Rat {
        let units: u64 = self
            .counts
            .iter()
            .enumerate()
            .filter(|&(r, _)| gcd_i64(r as i64, self.q as i64) == 1)
            .map(|(_, &c)| c)
            .sum();
        Rat::new(BigInt::from(units), BigInt::from(euler_phi(self.q)))
    }
}

pub fn region_histogram(s: &RegionS, qs: &[u64], b: Option<u64>) -> Result<Vec<RegionHistogram>> {
    let mut hs: Vec<RegionHistogram> = qs.iter().map(|&q| RegionHistogram { q, counts: vec![0; q as usize], total: 0 }).collect();
    scan(s, |u, v, w| {
        if let Some(b) = b {
            if gcd_i64(v, b as i64 * w) != 1 {
                return;
            }
        }
        let p = u as i128 * v as i128 * w as i128;
        for h in hs.iter_mut() {
            h.counts[p.rem_euclid(h.q as i128) as usize] += 1;
            h.total += 1;
        }
    })?;
    Ok(hs)
}

/// `D(S; q, a)`, or `D_b(S; q, a)` when `b` is given.
pub fn d_count(s: &RegionS, q: u64, a: i64, b: Option<u64>) -> Result<u64> {
    if gcd_i64(a, q as i64) != 1 {
        return Err(Error::InvalidArgument(format!("a = {a} and q = {q} must be coprime")));
    }
    Ok(region_histogram(s, &[q], b)?[0].d(a))
}

/// `D*(S; q)`, or `D_b*(S; q)` when `b` is given.
pub fn d_star(s: &RegionS, q: u64, b: Option<u64>) -> Result<Rat> {
    Ok(region_histogram(s, &[q], b)?[0].d_star())
}

#[derive(Clone, Debug, Default)]
pub struct CellDecomposition {
    /// cells whose lattice points all lie in `S`
    pub inside: Vec<Box3>,
    /// cells with lattice points both in and out of `S`
    pub boundary: Vec<Box3>,
    /// lattice points of `S` in inside / boundary cells
    pub inside_points: u64,
    pub boundary_points: u64,
}

/// Split the lattice points of `S` along the grid cells `I × J × K`.
///
/// Cells with no lattice point of `S` are dropped, so every point of
/// `S ∩ Z³` lies in exactly one listed cell.
pub fn box_decompose(s: &RegionS, grid: &GeomGrid) -> Result<CellDecomposition> {
    // collect the points first: this also applies the scan budget
    let mut pts = Vec::new();
    scan(s, |u, v, w| pts.push((u, v, w)))?;
    let mut out = CellDecomposition::default();
    if pts.is_empty() {
        return Ok(out);
    }
    let max_u = pts.iter().map(|p| p.0).max().unwrap_or(1) as f64;
    let max_v = pts.iter().map(|p| p.1).max().unwrap_or(1) as f64;
    let max_w = pts.iter().map(|p| p.2.abs()).max().unwrap_or(1) as f64;
    let cells = |m: f64| -> Vec<Range1> {
        grid.endpoints(m).windows(2).filter_map(|w| Range1::new(w[0], w[1]).ok()).filter(|r| !r.is_empty()).collect()
    };
    let cu = cells(max_u);
    let cv = cells(max_v);
    let cw_pos = cells(max_w);
    let mut cw: Vec<Range1> = cw_pos.iter().map(|r| Range1::new(-r.hi, -r.lo).unwrap()).collect();
    cw.extend(cw_pos);
    for i in &cu {
        let (u0, u1) = i.int_range();
        for j in &cv {
            let (v0, v1) = j.int_range();
            for k in &cw {
                let (w0, w1) = k.int_range();
                let (mut yes, mut no) = (0u64, 0u64);
                for u in u0..=u1 {
                    for v in v0..=v1 {
                        for w in w0..=w1 {
                            if s_member(s, u as f64, v as f64, w as f64) {
                                yes += 1;
                            } else {
                                no += 1;
                            }
                        }
                    }
                }
                let bx = Box3::new(*i, *j, *k);
                if yes > 0 && no == 0 {
                    out.inside.push(bx);
                    out.inside_points += yes;
                } else if yes > 0 {
                    out.boundary.push(bx);
                    out.boundary_points += yes;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equidist::{n_count, Box3};

    #[test]
    fn membership() {
        let s = RegionS { x: 10.0, x1: 1e9, x2: 1e9, t: 0.0, z: 1.0, l1: 1e-9, l2: 1e-9 };
        assert!(s_member(&s, 1.0, 1.0, 1.0));
        let s1 = RegionS { l1: 2.0, ..s };
        assert!(!s_member(&s1, 1.0, 1.0, 1.0));
        let s2 = RegionS { z: 5.0, ..s };
        assert!(!s_member(&s2, 1.0, 1.0, 1.0));
    }

    #[test]
    fn region_reducing_to_a_point() {
        // |uvw| = 8 is forced by (C) and (D); (A) then drops (1,4,±2) and the
        // shift T = 1 drops (2,2,−2)
        let s = RegionS { x: 8.0, x1: 72.0, x2: 8.0, t: 1.0, z: 8.0, l1: 2.0, l2: 2.0 };
        let mut pts = Vec::new();
        scan(&s, |u, v, w| pts.push((u, v, w))).unwrap();
        assert_eq!(pts, vec![(2, 2, 2)]);
        let bx = Box3::cube(1.0, 2.0).unwrap();
        assert_eq!(d_count(&s, 3, 2, None).unwrap(), n_count(&bx, 3, 2).unwrap());
    }

    #[test]
    fn large_l1_empties_region() {
        let s = RegionS { l1: 11.0, ..RegionS::template(10.0) };
        assert_eq!(d_count(&s, 1, 0, None).unwrap(), 0);
    }

    #[test]
    fn partition_over_classes() {
        let s = RegionS::template(300.0);
        let all = region_histogram(&s, &[1], None).unwrap()[0].total;
        for q in [1u64, 2, 7, 12, 30] {
            let h = &region_histogram(&s, &[q], None).unwrap()[0];
            let units: u64 = (0..q as i64).filter(|&a| gcd_i64(a, q as i64) == 1).map(|a| h.d(a)).sum();
            let rest: u64 = (0..q as i64).filter(|&a| gcd_i64(a, q as i64) != 1).map(|a| h.d(a)).sum();
            assert_eq!(units + rest, all);
            assert_eq!(Rat::from_integer(units.into()), h.d_star() * Rat::from_integer(euler_phi(q).into()));
        }
    }

    #[test]
    fn scan_matches_definition_on_a_box() {
        let s = RegionS { x: 60.0, x1: 5e4, x2: 200.0, t: 7.0, z: 3.0, l1: 1.5, l2: 1.0 };
        let mut n = 0;
        scan(&s, |_, _, _| n += 1).unwrap();
        let mut m = 0;
        for u in 1..=60i64 {
            for v in 1..=60i64 {
                for w in -60..=60i64 {
                    if s_member(&s, u as f64, v as f64, w as f64) {
                        m += 1;
                    }
                }
            }
        }
        assert_eq!(n, m);
    }

    #[test]
    fn unbounded_or_huge_regions_are_rejected() {
        let s = RegionS { l2: 0.0, ..RegionS::template(10.0) };
        assert!(matches!(d_count(&s, 1, 0, None), Err(Error::UnboundedRegion(_))));
        assert!(matches!(d_count(&RegionS::template(1e12), 1, 0, None), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn decomposition_partitions_lattice_points() {
        let s = RegionS::template(500.0);
        let total = region_histogram(&s, &[1], None).unwrap()[0].total;
        for delta in [1.0, 0.5, 0.25] {
            let d = box_decompose(&s, &GeomGrid::new(delta).unwrap()).unwrap();
            assert_eq!(d.inside_points + d.boundary_points, total);
            let lx = 500f64.ln() / (1.0 + delta).ln();
            assert!(((d.inside.len() + d.boundary.len()) as f64) <= 2.0 * (lx + 2.0).powi(3));
        }
    }

    #[test]
    fn aligned_region_has_no_boundary() {
        let s = RegionS { x: 1.0, x1: 1e9, x2: 1e9, t: 0.0, z: 0.5, l1: 1.0, l2: 1.0 };
        let d = box_decompose(&s, &GeomGrid::new(1.0).unwrap()).unwrap();
        assert!(d.boundary.is_empty());
        assert_eq!(d.inside_points, 2);
    }
}
