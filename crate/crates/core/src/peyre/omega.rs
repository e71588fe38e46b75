//! The archimedean density
//!
//! ```text
//! ω∞ = 12 ∫∫∫_{t6, t7 > 0, h(t8, t6, t7) ≤ 1} dt8 dt6 dt7
//! h  = max(t6² |t7² + t6 t8|, t7, |t8|, t6 t7 |t8|)
//! ```
//!
//! by nested adaptive quadrature (method A) and randomized quasi-Monte Carlo
//! (method B), plus a Monte Carlo estimate of the same density in the
//! original `x`-coordinates.

use crate::interval::Interval;
use crate::quadrature::{integrate_with_breaks, QuadOptions};
use crate::rng::stream_rng;
use crate::{Error, Result};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::cell::Cell;

/// Outer truncation of the `t6` range for method A.
pub const T0: f64 = 1000.0;

pub fn h_eval(t8: f64, t6: f64, t7: f64) -> f64 {
    let s = (t7 * t7 + t6 * t8).abs();
    (t6 * t6 * s).max(t7).max(t8.abs()).max(t6 * t7 * t8.abs())
}

pub fn in_region(t8: f64, t6: f64, t7: f64) -> bool {
    t6 > 0.0 && t7 > 0.0 && h_eval(t8, t6, t7) <= 1.0
}

/// Measure of `{t8 : h(t8, t6, t7) ≤ 1}` for `t6 > 0`, `0 < t7 ≤ 1`: the
/// intersection of `|t8| ≤ min(1, 1/(t6 t7))` with `|t7² + t6 t8| ≤ t6^{-2}`.
pub fn t8_measure(t6: f64, t7: f64) -> f64 {
    if t7 > 1.0 {
        return 0.0;
    }
    let m = (1.0 / (t6 * t7)).min(1.0);
    let r = 1.0 / (t6 * t6 * t6);
    let c = -t7 * t7 / t6;
    ((c + r).min(m) - (c - r).max(-m)).max(0.0)
}

/// Sign changes of each `g` on `[lo, hi]`, located on a geometric grid and
/// refined by bisection.
pub(crate) fn crossings(gs: &[&dyn Fn(f64) -> f64], lo: f64, hi: f64) -> Vec<f64> {
    let grid: Vec<f64> = (0..=400).map(|i| lo * (hi / lo).powf(i as f64 / 400.0)).collect();
    let mut out = Vec::new();
    for g in gs {
        for w in grid.windows(2) {
            let (mut a, mut b) = (w[0], w[1]);
            let (ga, gb) = (g(a), g(b));
            if ga == 0.0 {
                out.push(a);
            }
            if ga * gb >= 0.0 {
                continue;
            }
            for _ in 0..80 {
                let c = 0.5 * (a + b);
                if (g(c) > 0.0) == (ga > 0.0) {
                    a = c;
                } else {
                    b = c;
                }
            }
            out.push(0.5 * (a + b));
        }
    }
    out
}

/// `t6` values where the formula for [`t8_measure`] changes branch.
fn kinks(t7: f64) -> Vec<f64> {
    let m = |t6: f64| (1.0 / (t6 * t7)).min(1.0);
    let hi = |t6: f64| 1.0 / (t6 * t6 * t6) - t7 * t7 / t6;
    let lo = |t6: f64| -1.0 / (t6 * t6 * t6) - t7 * t7 / t6;
    let mut out = crossings(&[&|t| hi(t) - m(t), &|t| lo(t) + m(t), &|t| hi(t) + m(t)], 1e-3, T0);
    out.extend([0.0, T0]);
    if 1.0 / t7 < T0 {
        out.push(1.0 / t7);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OmegaEstimate {
    pub value: f64,
    pub interval: Interval,
}

/// Method A. `tolerance` is relative; the interval adds the quadrature error
/// estimates and the analytic tail `∫_{T0}^∞ 2 t6^{-3} dt6 = T0^{-2}`.
pub fn omega_infty_a(tolerance: f64) -> Result<OmegaEstimate> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let inner_err = Cell::new(0.0f64);
    let inner_fail = Cell::new(None);
    let inner = |t7: f64| {
        let opts = QuadOptions { abs_tol: 1e-3 * tolerance, rel_tol: 0.0, max_intervals: 5_000 };
        match integrate_with_breaks(|t6| t8_measure(t6, t7), &kinks(t7), opts) {
            Ok(r) => {
                inner_err.set(inner_err.get().max(r.error));
                r.value
            }
            Err(e) => {
                inner_fail.set(Some(e));
                0.0
            }
        }
    };
    let outer = integrate_with_breaks(inner, &[0.0, 1.0], QuadOptions { abs_tol: 0.0, rel_tol: 0.1 * tolerance, max_intervals: 2_000 });
    if let Some(e) = inner_fail.take() {
        return Err(e);
    }
    let outer = outer?;
    let err = outer.error + inner_err.get();
    let tail = 1.0 / (T0 * T0);
    let value = 12.0 * outer.value;
    let interval = Interval::new(12.0 * (outer.value - err), 12.0 * (outer.value + err + tail)).pad_rel(1e-12);
    if interval.width() > tolerance * value.abs() {
        return Err(Error::NonConvergent { tolerance, estimate: value });
    }
    Ok(OmegaEstimate { value, interval })
}

/// The reference enclosure of `ω∞` (method A).
pub fn omega_infty(tolerance: f64) -> Result<Interval> {
    omega_infty_a(tolerance).map(|e| e.interval)
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut r = 0.0;
    while i > 0 {
        r += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    r
}

fn halton3(i: u64) -> [f64; 3] {
    [radical_inverse(i, 2), radical_inverse(i, 3), radical_inverse(i, 5)]
}

/// Method B: Halton points under Cranley–Patterson rotations.
///
/// `t6 ≤ 2` is sampled from the box `(0,2]×(0,1]×[−1,1]`. For `t6 > 2` the
/// substitution `t8 = (σ t6^{-2} − t7²)/t6` with `t6` drawn from the density
/// `8 t6^{-3}` leaves a bounded integrand over `(t7, σ) ∈ (0,1]×[−1,1]`, so
/// no truncation is needed. The interval is mean ± 4 standard errors across
/// rotations.
pub fn omega_infty_b(points: u64, replicates: u64, seed: u64) -> Result<OmegaEstimate> {
    if points == 0 || replicates < 2 {
        return Err(Error::InvalidArgument("need points ≥ 1 and at least two replicates".into()));
    }
    let reps: Vec<f64> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, r);
            let shift: [f64; 3] = [rng.random(), rng.random(), rng.random()];
            let (mut near, mut far) = (0u64, 0u64);
            for i in 1..=points {
                let h = halton3(i);
                let u = [(h[0] + shift[0]).fract(), (h[1] + shift[1]).fract(), (h[2] + shift[2]).fract()];
                let t7 = 1.0 - u[1];
                if in_region(2.0 * u[2] - 1.0, 2.0 * (1.0 - u[0]), t7) {
                    near += 1;
                }
                let t6 = 2.0 / u[0].max(f64::MIN_POSITIVE).sqrt();
                let sigma = 2.0 * u[2] - 1.0;
                let t8 = (sigma / (t6 * t6) - t7 * t7) / t6;
                if in_region(t8, t6, t7) {
                    far += 1;
                }
            }
            12.0 * (4.0 * near as f64 + 0.25 * far as f64) / points as f64
        })
        .collect();
    let n = reps.len() as f64;
    let mean = reps.iter().sum::<f64>() / n;
    let var = reps.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let se = (var / n).sqrt();
    Ok(OmegaEstimate { value: mean, interval: Interval::around(mean, 4.0 * se) })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JacobianReport {
    pub samples: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub reference: f64,
    pub relative_difference: f64,
    pub agrees: bool,
}

/// Indicator of `0 < x3²|x1 + x3|/(x1 x2) ≤ 1`, `0 < x1, x2 ≤ 1`, `|x3| ≤ 1`.
pub fn x_region(x1: f64, x2: f64, x3: f64) -> bool {
    if !(x1 > 0.0 && x1 <= 1.0 && x2 > 0.0 && x2 <= 1.0 && x3.abs() <= 1.0) {
        return false;
    }
    let q = x3 * x3 * (x1 + x3).abs();
    q > 0.0 && q <= x1 * x2
}

/// Monte Carlo for `2 ∫∫∫ dx1 dx2 dx3 / (x1 x2)` over [`x_region`], with
/// `x1 = e^{-a}`, `x2 = e^{-b}`, `a, b ~ Exp(mean 6)` and `x3` uniform. The
/// `x3`-section shrinks like `(x1 x2)^{1/3}`, so the weights have finite variance.
pub fn jacobian_crosscheck(samples: u64, seed: u64, reference: f64) -> Result<JacobianReport> {
    if samples < 10_000 {
        return Err(Error::InvalidArgument("jacobian_crosscheck needs at least 10^4 samples".into()));
    }
    const BATCH: u64 = 1 << 16;
    let batches = samples.div_ceil(BATCH);
    // Batches are summed in order so the result does not depend on the thread count.
    let parts: Vec<(f64, f64, u64)> = (0..batches)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(seed, k);
            let m = BATCH.min(samples - k * BATCH);
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..m {
                let a = -6.0 * (1.0 - rng.random::<f64>()).ln();
                let b = -6.0 * (1.0 - rng.random::<f64>()).ln();
                let x3 = 2.0 * rng.random::<f64>() - 1.0;
                if x_region((-a).exp(), (-b).exp(), x3) {
                    let w = 2.0 * 36.0 * ((a + b) / 6.0).exp() * 2.0;
                    s1 += w;
                    s2 += w * w;
                }
            }
            (s1, s2, m)
        })
        .collect();
    let (s1, s2, n) = parts.iter().fold((0.0, 0.0, 0), |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2));
    let nf = n as f64;
    let estimate = s1 / nf;
    let std_error = ((s2 / nf - estimate * estimate).max(0.0) / nf).sqrt();
    let relative_difference = (estimate - reference).abs() / reference.abs();
    let agrees = (estimate - reference).abs() <= (4.0 * std_error).max(0.05 * reference.abs());
    Ok(JacobianReport { samples: n, estimate, std_error, reference, relative_difference, agrees })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_values() {
        assert_eq!(h_eval(0.5, 1.0, 0.5), 0.75);
        assert_eq!(h_eval(0.0, 0.0, 2.0), 2.0);
        assert_eq!(h_eval(1.0, 1.0, 1.0), 2.0);
        assert!(in_region(0.5, 1.0, 0.5));
        assert!(!in_region(0.0, 0.0, 2.0));
    }

    #[test]
    fn t8_measure_matches_grid() {
        for &(t6, t7) in &[(0.3, 0.9), (1.0, 0.5), (1.7, 0.2), (4.0, 0.8), (0.9, 1.0)] {
            let n = 200_000;
            let hits = (0..n)
                .filter(|i| h_eval(-1.0 + 2.0 * (*i as f64 + 0.5) / n as f64, t6, t7) <= 1.0)
                .count();
            let grid = 2.0 * hits as f64 / n as f64;
            assert!((grid - t8_measure(t6, t7)).abs() < 1e-4, "t6={t6} t7={t7}");
        }
    }

    #[test]
    fn methods_agree() {
        let a = omega_infty_a(1e-6).unwrap();
        let b = omega_infty_b(1 << 16, 16, 7).unwrap();
        assert!(a.interval.width() < 1e-6 * a.value);
        assert!((a.value - b.value).abs() < 1e-3 * a.value, "{} vs {}", a.value, b.value);
        assert!(a.interval.intersects(&b.interval));
    }

    #[test]
    fn refinement_is_stable() {
        let a = omega_infty_a(1e-5).unwrap();
        let b = omega_infty_a(5e-6).unwrap();
        assert!((a.value - b.value).abs() < 1e-4 * a.value);
        assert!(a.interval.intersects(&b.interval));
    }

    #[test]
    fn x_space_agrees() {
        let a = omega_infty_a(1e-6).unwrap();
        let r = jacobian_crosscheck(1_000_000, 3, a.value).unwrap();
        assert!(r.agrees);
        assert!(r.relative_difference < 0.05);
        assert_eq!(r, jacobian_crosscheck(1_000_000, 3, a.value).unwrap());
        assert!(!x_region(1.0, 1.0, -1.0));
    }

    #[test]
    fn monte_carlo_ignores_thread_count() {
        let run = |threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| (jacobian_crosscheck(300_000, 11, 35.0).unwrap(), omega_infty_b(1 << 12, 8, 11).unwrap()))
        };
        assert_eq!(run(1), run(5));
    }
}
