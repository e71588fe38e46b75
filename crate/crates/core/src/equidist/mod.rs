//! Restricted divisor counts in arithmetic progressions.
//!
//! Counts of `(u, v, w)` with `uvw ≡ a (mod q)` over boxes and over the region
//! `S`, their coprime averages, the exact double Möbius expansion of the
//! restricted count `N_b`, the geometric cell decomposition of `S`, and the
//! measured discrepancies `|D_b − D_b*|` against `E(X, q)`.

mod boxes;
mod experiment;
mod measure;
mod region;

pub use boxes::{mobius_expand_nb, n_b_count, n_b_star, n_count, n_star, Box3, Range1};
pub use experiment::{experiment_equidist, report_csv, EquidistConfig, EquidistReport, EquidistRow};
pub use measure::elementary_measure;
pub use region::{box_decompose, d_count, d_star, region_histogram, s_member, CellDecomposition, RegionHistogram, RegionS};

use crate::Rat;
use num_bigint::BigInt;

/// `ϑ = 29/300`.
pub fn theta() -> Rat {
    Rat::new(BigInt::from(29), BigInt::from(300))
}

/// `λ = 46/75`.
pub fn lambda() -> Rat {
    Rat::new(BigInt::from(46), BigInt::from(75))
}

/// `E(X, q) = X^{1/2} q^{-1/150} (X/q²)^{17/150}`.
pub fn e_bound(x: f64, q: u64) -> f64 {
    let q = q as f64;
    x.sqrt() * q.powf(-1.0 / 150.0) * (x / (q * q)).powf(17.0 / 150.0)
}

/// The geometric grid `ζ = 1 + δ` with cells `]ζⁿ, ζⁿ⁺¹]`, `n ≥ −1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeomGrid {
    pub delta: f64,
    pub zeta: f64,
}

impl GeomGrid {
    pub fn new(delta: f64) -> crate::Result<Self> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(crate::Error::InvalidArgument(format!("grid parameter δ must lie in (0, 1], got {delta}")));
        }
        Ok(Self { delta, zeta: 1.0 + delta })
    }

    /// Positive cell endpoints `ζ^{-1} < ζ⁰ < … ` up to the first one `≥ max`.
    pub fn endpoints(&self, max: f64) -> Vec<f64> {
        let mut out = vec![1.0 / self.zeta];
        let mut e = 1.0;
        loop {
            out.push(e);
            if e >= max {
                break;
            }
            e *= self.zeta;
        }
        out
    }
}
