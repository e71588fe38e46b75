//! The integrals `g1..g4` over the region `h ≤ 1` with the extra conditions
//! `t ≤ |t6 t8 + t7²|` and `|t8| Y8 ≥ ℒ`, `t6 Y6 ≥ ℒ`.
//!
//! For fixed `(t6, t7)` the admissible `t8` form the interval of
//! [`t8_measure`](crate::peyre::t8_measure) minus the open interval
//! `|t6 t8 + t7²| < t` and, for `g1`, minus `|t8| < ℒ/Y8`, so the innermost
//! integral is closed-form and only `t6` (and `t7`) need quadrature.

use super::MainTermGeometry;
use crate::peyre::{crossings, T0};
use crate::quadrature::{integrate_with_breaks, QuadOptions};
use crate::Result;
use std::cell::Cell;

const INNER_TOL: f64 = 1e-10;

fn overlap(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.1.min(b.1) - a.0.max(b.0)).max(0.0)
}

/// Measure of admissible `t8` at `(t6, t7)`, with `|t8| ≥ cut` imposed when `cut > 0`.
fn t8_length(t6: f64, t7: f64, t: f64, cut: f64) -> f64 {
    if t7 > 1.0 || t6 <= 0.0 {
        return 0.0;
    }
    let m = (1.0 / (t6 * t7)).min(1.0);
    let r = 1.0 / (t6 * t6 * t6);
    let c = -t7 * t7 / t6;
    let i = ((c - r).max(-m), (c + r).min(m));
    if i.1 <= i.0 {
        return 0.0;
    }
    let j = ((-t - t7 * t7) / t6, (t - t7 * t7) / t6);
    let k = (-cut, cut);
    let removed = overlap(i, j) + overlap(i, k) - overlap(overlap_interval(i, j), k);
    (i.1 - i.0 - removed).max(0.0)
}

fn overlap_interval(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0.max(b.0), a.1.min(b.1))
}

/// `∫_{t6 ≥ lo} t8_length dt6`, truncated at `T0` (or at `t^{-1/2}`, beyond
/// which `t ≤ |t6 t8 + t7²| ≤ t6^{-2}` is empty). The truncated tail lies in
/// `[0, T0^{-2}]` and is added at its midpoint.
fn t6_integral(t7: f64, t: f64, cut: f64, lo: f64) -> Result<f64> {
    if t7 > 1.0 {
        return Ok(0.0);
    }
    let (hi, tail) = if t > 0.0 { ((1.0 / t.sqrt()).min(T0), 0.0) } else { (T0, 0.5 / (T0 * T0)) };
    let tail = if t > 0.0 && 1.0 / t.sqrt() > T0 { 0.5 / (T0 * T0) } else { tail };
    if lo >= hi {
        return Ok(0.0);
    }
    let fs: [Box<dyn Fn(f64) -> f64>; 8] = [
        Box::new(move |s| -t7 * t7 / s - 1.0 / (s * s * s)),
        Box::new(move |s| -t7 * t7 / s + 1.0 / (s * s * s)),
        Box::new(move |s| -(1.0 / (s * t7)).min(1.0)),
        Box::new(move |s| (1.0 / (s * t7)).min(1.0)),
        Box::new(move |s| (-t - t7 * t7) / s),
        Box::new(move |s| (t - t7 * t7) / s),
        Box::new(move |_| -cut),
        Box::new(move |_| cut),
    ];
    let mut diffs: Vec<Box<dyn Fn(f64) -> f64 + '_>> = Vec::new();
    for a in 0..fs.len() {
        for b in a + 1..fs.len() {
            let (fa, fb) = (&fs[a], &fs[b]);
            diffs.push(Box::new(move |s| fa(s) - fb(s)));
        }
    }
    let refs: Vec<&dyn Fn(f64) -> f64> = diffs.iter().map(|f| f.as_ref() as &dyn Fn(f64) -> f64).collect();
    let mut pts = crossings(&refs, lo.max(1e-3), hi);
    pts.retain(|&x| x > lo && x < hi);
    pts.extend([lo, hi]);
    if 1.0 / t7 > lo && 1.0 / t7 < hi {
        pts.push(1.0 / t7);
    }
    let opts = QuadOptions { abs_tol: INNER_TOL, rel_tol: 0.0, max_intervals: 5_000 };
    let r = integrate_with_breaks(|s| t8_length(s, t7, t, cut), &pts, opts)?;
    Ok(r.value + tail)
}

pub fn g1(t6: f64, t7: f64, t: f64, geom: &MainTermGeometry) -> f64 {
    t8_length(t6, t7, t, geom.script_l / geom.y8)
}

pub fn g2(t7: f64, t: f64, geom: &MainTermGeometry) -> Result<f64> {
    t6_integral(t7, t, geom.script_l / geom.y8, geom.script_l / geom.y6)
}

pub fn g3(t7: f64, t: f64) -> Result<f64> {
    t6_integral(t7, t, 0.0, 0.0)
}

pub fn g4(t: f64) -> Result<f64> {
    let fail = Cell::new(None);
    let r = integrate_with_breaks(
        |t7| {
            g3(t7, t).unwrap_or_else(|e| {
                fail.set(Some(e));
                0.0
            })
        },
        &[0.0, 1.0],
        QuadOptions { abs_tol: 1e-9, rel_tol: 0.0, max_intervals: 2_000 },
    );
    if let Some(e) = fail.take() {
        return Err(e);
    }
    Ok(r?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::{geometry, EtaPrime};
    use crate::peyre::{h_eval, omega_infty_a, t8_measure};

    fn grid_measure(t6: f64, t7: f64, t: f64, cut: f64) -> f64 {
        let n = 400_000;
        let hits = (0..n)
            .map(|i| -1.0 + 2.0 * (i as f64 + 0.5) / n as f64)
            .filter(|&t8| h_eval(t8, t6, t7) <= 1.0 && (t6 * t8 + t7 * t7).abs() >= t && t8.abs() >= cut)
            .count();
        2.0 * hits as f64 / n as f64
    }

    #[test]
    fn closed_form_matches_grid() {
        for &(t6, t7, t, cut) in &[(0.5, 0.7, 0.3, 0.0), (1.2, 0.4, 0.1, 0.2), (0.3, 0.9, 0.0, 0.5), (2.0, 0.5, 0.05, 0.01), (0.8, 0.2, 1.0, 0.0)] {
            assert!((t8_length(t6, t7, t, cut) - grid_measure(t6, t7, t, cut)).abs() < 2e-5, "{t6} {t7} {t} {cut}");
        }
        assert_eq!(t8_length(0.7, 0.6, 0.0, 0.0), t8_measure(0.7, 0.6));
    }

    #[test]
    fn g4_at_zero_is_omega_over_12() {
        let omega = omega_infty_a(1e-6).unwrap();
        let g = g4(0.0).unwrap();
        assert!(omega.interval.contains(12.0 * g), "{} not in {}", 12.0 * g, omega.interval);
    }

    #[test]
    fn vanishing_ranges() {
        assert_eq!(g3(1.5, 0.0).unwrap(), 0.0);
        assert_eq!(g4(2.0).unwrap(), 0.0);
        assert_eq!(g4(3.0).unwrap(), 0.0);
        assert!(g4(1.0).unwrap() > 0.0);
        assert!(g4(0.5).unwrap() < g4(0.1).unwrap());
    }

    #[test]
    fn region_stays_below_two() {
        // Largest |t6 t8 + t7²| on h ≤ 1, by a grid search.
        let mut best = 0.0f64;
        for i in 1..=300 {
            let t6 = 3.0 * i as f64 / 300.0;
            for j in 1..=100 {
                let t7 = j as f64 / 100.0;
                for k in 0..=200 {
                    let t8 = -1.0 + k as f64 / 100.0;
                    if h_eval(t8, t6, t7) <= 1.0 {
                        best = best.max((t6 * t8 + t7 * t7).abs());
                    }
                }
            }
        }
        assert!(best < 2.0 && best > 1.5, "{best}");
    }

    #[test]
    fn g1_and_g2_bounds() {
        let g = geometry(&EtaPrime::ones(), 1_000_000, 1, 1, 1, 1.0).unwrap();
        for &(t6, t7) in &[(0.2, 0.3), (1.0, 1.0), (3.0, 0.5), (0.05, 0.9)] {
            for t in [0.0, 0.1, 0.5] {
                let v = g1(t6, t7, t, &g);
                assert!(v <= 2.0 / (t6 * t7) + 1e-12 && v <= 2.0);
            }
        }
        let mut tall = g;
        tall.script_l = 2.0 * tall.y8;
        assert_eq!(g1(0.5, 0.5, 0.0, &tall), 0.0);
        for t7 in [0.1, 0.5, 0.9] {
            let v = g2(t7, 0.0, &g).unwrap();
            assert!(v <= 3.0 && v <= g3(t7, 0.0).unwrap() + 1e-9);
        }
    }
}
