//! Measured discrepancies `|D_b(S; q, a) − D_b*(S; q)|` over a grid of `(X, q)`.

use super::region::{region_histogram, RegionS};
use super::{e_bound, lambda, theta};
use crate::arith::{euler_phi, gcd_i64, sigma_neg};
use crate::Result;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquidistConfig {
    pub xs: Vec<f64>,
    pub qs: Vec<u64>,
    /// grid parameter, recorded in each row
    pub delta: f64,
    pub b: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquidistRow {
    #[serde(rename = "X")]
    pub x: f64,
    pub q: u64,
    pub delta: f64,
    pub b: u64,
    pub max_err: f64,
    pub mean_err: f64,
    #[serde(rename = "E_bound")]
    pub e_bound: f64,
    pub main_shape: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct EquidistReport {
    pub rows: Vec<EquidistRow>,
}

/// `σ_{−λ}(b)^{1/4} X^{1/2} q^{−1/600} (X/q²)^{1/2−ϑ} + X log X / φ(q) · (1/L1 + 1/L2)`.
fn main_shape(s: &RegionS, q: u64, b: u64) -> f64 {
    let th = theta().to_f64().unwrap();
    let lam = lambda().to_f64().unwrap();
    let qf = q as f64;
    sigma_neg(lam, b).powf(0.25) * s.x.sqrt() * qf.powf(-1.0 / 600.0) * (s.x / (qf * qf)).powf(0.5 - th)
        + s.x * s.x.ln() / euler_phi(q) as f64 * (1.0 / s.l1 + 1.0 / s.l2)
}

/// One row per `(X, q)` on the template region `S(X, X², X, X/2, 1, 1, 1)`;
/// rows ordered by `X` then by position in `qs`.
pub fn experiment_equidist(cfg: &EquidistConfig) -> Result<EquidistReport> {
    let rows: Result<Vec<Vec<EquidistRow>>> = cfg
        .xs
        .par_iter()
        .map(|&x| {
            let s = RegionS::template(x);
            let hs = region_histogram(&s, &cfg.qs, Some(cfg.b))?;
            Ok(hs
                .iter()
                .map(|h| {
                    let star = h.d_star().to_f64().unwrap();
                    let errs: Vec<f64> = (0..h.q as i64)
                        .filter(|&a| gcd_i64(a, h.q as i64) == 1)
                        .map(|a| (h.d(a) as f64 - star).abs())
                        .collect();
                    EquidistRow {
                        x,
                        q: h.q,
                        delta: cfg.delta,
                        b: cfg.b,
                        max_err: errs.iter().copied().fold(0.0, f64::max),
                        mean_err: errs.iter().sum::<f64>() / errs.len() as f64,
                        e_bound: e_bound(x, h.q),
                        main_shape: main_shape(&s, h.q, cfg.b),
                    }
                })
                .collect())
        })
        .collect();
    Ok(EquidistReport { rows: rows?.into_iter().flatten().collect() })
}

pub fn report_csv(r: &EquidistReport) -> String {
    let mut s = String::from("X,q,delta,b,max_err,mean_err,E_bound,main_shape\n");
    for w in &r.rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            w.x, w.q, w.delta, w.b, w.max_err, w.mean_err, w.e_bound, w.main_shape
        ));
    }
    s
}
