//! The generating function φ(N, l, t, β) by two independent routes (Hankel
//! determinant and the circle Verblunsky product), a direct tableau sum for
//! small N, and the de-Poissonization sandwich.

mod depoisson;
mod direct;
mod hankel;
mod moments;
mod opuc;

pub use depoisson::{depoisson_g, lemma_indices, nb_cdf, sandwich_bounds, Depoissonized, LemmaIndices, MonotoneSeq, SandwichBounds};
pub use direct::{phi_direct_sum, DirectSum};
pub use hankel::{
    cosine_mode_moments, hankel_moment, phi_hankel, phi_hankel_table, quadrature_moments, MomentMatrix,
};
pub use moments::{toeplitz_coeff, ToeplitzMoments};
pub use opuc::{levinson, levinson_bits, phi_opuc, phi_opuc_table, VerblunskyData};

use crate::error::{Error, Result};
use crate::precision::PrecisionPolicy;
use rug::Float;

/// φ at odd l = 1, 3, 5, ..., l_max for fixed (N, t), with the precision it was accepted at.
#[derive(Clone, Debug)]
pub struct PhiTable {
    pub n: u32,
    pub t: f64,
    pub bits: u32,
    /// Largest gap between the two agreeing precision levels.
    pub gap: f64,
    /// values[i] = φ(N, 2i+1, t).
    pub values: Vec<Float>,
}

impl PhiTable {
    pub fn l_max(&self) -> usize {
        2 * self.values.len() - 1
    }

    /// φ at an odd l.
    pub fn odd(&self, l: usize) -> Option<&Float> {
        if l % 2 == 1 {
            self.values.get((l - 1) / 2)
        } else {
            None
        }
    }

    /// Bracket [φ(l−1), φ(l+1)] for even l (exact for odd l); φ(−1) is read as 0.
    pub fn bracket(&self, l: usize) -> Option<(f64, f64)> {
        if l % 2 == 1 {
            let v = self.odd(l)?.to_f64();
            return Some((v, v));
        }
        let hi = self.odd(l + 1)?.to_f64();
        let lo = if l == 0 { 0.0 } else { self.odd(l - 1)?.to_f64() };
        Some((lo, hi))
    }
}

pub(crate) fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!("t = {t} must lie in (0, 1)")));
    }
    Ok(())
}

pub(crate) fn check_odd(l: usize) -> Result<usize> {
    if l % 2 == 0 {
        return Err(Error::Domain(format!("l = {l} must be odd for the determinant formula")));
    }
    Ok((l - 1) / 2)
}

/// φ(N, l, t) for any l: exact for odd l, monotonicity bracket for even l.
pub fn phi_bracket(n: u32, l: usize, t: f64, policy: &PrecisionPolicy) -> Result<(f64, f64)> {
    let table = phi_hankel_table(n, t, if l % 2 == 1 { l } else { l + 1 }, policy)?;
    Ok(table.bracket(l).expect("table covers l"))
}

pub(crate) fn max_gap(a: &[Float], b: &[Float]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| Float::with_val(x.prec().max(y.prec()), x - y).abs().to_f64())
        .fold(0.0, f64::max)
}
