use super::check_t;
use crate::error::{Error, Result};
use crate::precision::PrecisionPolicy;
use rug::Float;

/// Fourier coefficients c_0..c_K of (1−tz)^{−N}(1−t/z)^{−N} on the unit circle.
#[derive(Clone, Debug)]
pub struct ToeplitzMoments {
    pub n: u32,
    pub t: f64,
    pub prec: u32,
    pub coeffs: Vec<Float>,
    /// Largest certified bound on a dropped series tail.
    pub truncation_error: Float,
}

const MAX_TERMS: u64 = 50_000_000;

/// c_k = t^k Σ_m binom(N+m−1, m) binom(N+m+k−1, m+k) t^{2m}, summed until the
/// remaining tail is certified below 2^{−(prec+8)} relative to the partial sum.
///
/// Term ratios r_m = t²(N+m)(N+m+k)/((m+1)(m+k+1)) are nonincreasing in m, so
/// once r_{m+1} < 1 the tail after term m is at most T_{m+1}/(1 − r_{m+1}).
fn series(n: u32, t: &Float, k: u64, prec: u32) -> Result<(Float, Float)> {
    if n == 0 {
        let v = if k == 0 { 1 } else { 0 };
        return Ok((Float::with_val(prec, v), Float::new(prec)));
    }
    let nn = n as u64;
    let t2 = Float::with_val(prec, t * t);
    // T_0 = t^k binom(N+k−1, k)
    let mut term = Float::with_val(prec, 1);
    for i in 0..k {
        term *= t;
        term *= nn + i;
        term /= i + 1;
    }
    let rel = Float::with_val(prec, Float::i_exp(1, -(prec as i32 + 8)));
    let mut sum = Float::new(prec);
    let mut m = 0u64;
    loop {
        sum += &term;
        // ratio from m to m+1, then from m+1 to m+2
        let mut r = Float::with_val(prec, &t2 * ((nn + m) * (nn + m + k)));
        r /= (m + 1) * (m + k + 1);
        term *= &r;
        let mut r_next = Float::with_val(prec, &t2 * ((nn + m + 1) * (nn + m + k + 1)));
        r_next /= (m + 2) * (m + k + 2);
        if r_next < 1 {
            let tail = Float::with_val(prec, &term / Float::with_val(prec, 1 - &r_next));
            if tail <= Float::with_val(prec, &sum * &rel) {
                return Ok((sum, tail));
            }
        }
        m += 1;
        if m > MAX_TERMS {
            return Err(Error::PrecisionExhausted(format!("Toeplitz series for N={n}, k={k} did not converge")));
        }
    }
}

impl ToeplitzMoments {
    pub fn new(n: u32, t: f64, k_max: usize, prec: u32) -> Result<Self> {
        check_t(t)?;
        let tf = Float::with_val(prec, t);
        let mut coeffs = Vec::with_capacity(k_max + 1);
        let mut worst = Float::new(prec);
        for k in 0..=k_max as u64 {
            let (c, tail) = series(n, &tf, k, prec)?;
            if tail > worst {
                worst = tail;
            }
            coeffs.push(c);
        }
        Ok(Self { n, t, prec, coeffs, truncation_error: worst })
    }

    pub fn k_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// c_k for any integer k (the weight is real and even).
    pub fn get(&self, k: i64) -> &Float {
        &self.coeffs[k.unsigned_abs() as usize]
    }
}

/// Single coefficient c_k at the policy's working precision.
pub fn toeplitz_coeff(n: u32, t: f64, k: u64, policy: &PrecisionPolicy) -> Result<Float> {
    check_t(t)?;
    policy.validate()?;
    let prec = policy.bits;
    let (c, tail) = series(n, &Float::with_val(prec, t), k, prec)?;
    if tail.to_f64() > policy.target_tol {
        return Err(Error::PrecisionExhausted(format!("tail bound {} above tolerance", tail.to_f64())));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_weight() {
        let m = ToeplitzMoments::new(0, 0.6, 5, 128).unwrap();
        assert_eq!(m.coeffs[0], 1);
        assert!(m.coeffs[1..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn single_factor_is_geometric() {
        // N = 1: c_k = t^k / (1 − t²)
        let m = ToeplitzMoments::new(1, 0.5, 12, 192).unwrap();
        for k in 0..=12 {
            let exact = Float::with_val(192, 4) / 3 / Float::with_val(192, Float::u_pow_u(2, k as u32));
            let err = Float::with_val(192, &m.coeffs[k] - &exact).abs();
            assert!(err < 1e-50, "k={k}");
        }
    }

    #[test]
    fn matches_trapezoid_quadrature() {
        // N = 2, t = 0.3: c_0 = (1/2π)∫(1+t²−2t cos θ)^{−2} dθ; trapezoid rule is spectrally accurate here.
        let t: f64 = 0.3;
        let n = 256;
        let q: f64 = (0..n)
            .map(|i| {
                let th = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                (1.0 + t * t - 2.0 * t * th.cos()).powi(-2)
            })
            .sum::<f64>()
            / n as f64;
        let c0 = toeplitz_coeff(2, t, 0, &PrecisionPolicy::default()).unwrap();
        assert!((c0.to_f64() - q).abs() < 1e-14);
        // closed form (1+t²)/(1−t²)³
        let closed = (1.0 + t * t) / (1.0 - t * t).powi(3);
        assert!((c0.to_f64() - closed).abs() < 1e-14);
    }

    #[test]
    fn coefficients_positive_and_ratio_tends_to_t() {
        let m = ToeplitzMoments::new(5, 0.7, 400, 256).unwrap();
        assert!(m.coeffs.iter().all(|c| *c > 0));
        let r = Float::with_val(256, &m.coeffs[400] / &m.coeffs[399]).to_f64();
        assert!((r - 0.7).abs() < 0.02);
        assert!(m.truncation_error < 1e-70);
    }

    #[test]
    fn rejects_bad_t() {
        assert!(ToeplitzMoments::new(1, 1.0, 3, 64).is_err());
        assert!(toeplitz_coeff(1, 0.0, 0, &PrecisionPolicy::default()).is_err());
    }
}
