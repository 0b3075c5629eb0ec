use crate::error::{Error, Result};
use crate::precision::PrecisionPolicy;
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

/// Largest |x| accepted; the Maclaurin guard bits grow like |x|^{3/2}.
pub const AIRY_RANGE: f64 = 100.0;

/// Above this point the asymptotic series is accurate enough to cross-check the Maclaurin sum.
pub const ASYMPTOTIC_FROM: f64 = 8.0;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct AiryEval {
    pub x: f64,
    pub ai: f64,
    pub ai_prime: f64,
}

/// Ai, Ai' and ∫_x^∞ Ai at working precision.
#[derive(Clone, Debug)]
pub struct AiryMp {
    pub ai: Float,
    pub ai_prime: Float,
    pub tail_int: Float,
}

fn guard_bits(x: f64) -> u32 {
    let zeta = 2.0 / 3.0 * x.abs().powf(1.5);
    (2.0 * zeta * std::f64::consts::LOG2_E).ceil() as u32 + 32
}

/// Σ over n ≡ start (mod 3) of c_n x^n with c_{n+3} = c_n/((n+α)(n+β)).
fn chain(x: &Float, x3: &Float, start: u32, c0: Float, shift: (u32, u32), integrate: bool, eps: &Float) -> Float {
    let wp = x.prec();
    let xa = x.to_f64().abs();
    let mut term = Float::with_val(wp, x.pow(start)) * c0;
    let mut n = start;
    let mut acc = Float::new(wp);
    loop {
        if integrate {
            acc += Float::with_val(wp, &term * x) / (n + 1);
        } else {
            acc += &term;
        }
        term *= x3;
        term /= (n + shift.0) * (n + shift.1);
        n += 3;
        let nf = n as f64;
        if nf * nf > 4.0 * xa.powi(3) + 16.0 && Float::with_val(wp, term.abs_ref()) * (1 + xa as u32) < *eps {
            return acc;
        }
    }
}

/// Ai(x) = Σ a_n x^n with a_{n+3} = a_n/((n+2)(n+3)), a_0 = Ai(0), a_1 = Ai'(0), a_2 = 0;
/// Ai'(x) = Σ b_m x^m with b_{m+3} = b_m/((m+1)(m+3)), b_0 = a_1, b_2 = a_0/2.
/// The tail integral uses ∫_0^∞ Ai = 1/3.
pub fn airy_mp(x: &Float, prec: u32) -> Result<AiryMp> {
    let xf = x.to_f64();
    if !xf.is_finite() || xf.abs() > AIRY_RANGE {
        return Err(Error::Domain(format!("Airy argument {xf} outside [−{AIRY_RANGE}, {AIRY_RANGE}]")));
    }
    let wp = prec + guard_bits(xf);
    let x = Float::with_val(wp, x);
    let third = Float::with_val(wp, 1u32) / 3u32;
    let two_thirds = Float::with_val(wp, 2u32) / 3u32;
    let three = Float::with_val(wp, 3u32);
    let a0 = Float::with_val(wp, 1u32) / (Float::with_val(wp, (&three).pow(&two_thirds)) * Float::with_val(wp, two_thirds.gamma_ref()));
    let a1 = -(Float::with_val(wp, 1u32) / (Float::with_val(wp, (&three).pow(&third)) * Float::with_val(wp, third.gamma_ref())));
    let eps = Float::with_val(wp, Float::i_exp(1, -(wp as i32)));
    let x3 = Float::with_val(wp, (&x).pow(3u32));

    let ai = chain(&x, &x3, 0, a0.clone(), (2, 3), false, &eps) + chain(&x, &x3, 1, a1.clone(), (2, 3), false, &eps);
    let aip = chain(&x, &x3, 0, a1.clone(), (1, 3), false, &eps) + chain(&x, &x3, 2, a0.clone() / 2u32, (1, 3), false, &eps);
    let int0 = chain(&x, &x3, 0, a0, (2, 3), true, &eps) + chain(&x, &x3, 1, a1, (2, 3), true, &eps);
    Ok(AiryMp {
        ai: Float::with_val(prec, ai),
        ai_prime: Float::with_val(prec, aip),
        tail_int: Float::with_val(prec, third - int0),
    })
}

/// Leading asymptotic series for x > 0, truncated at the smallest term.
/// Returns (Ai, Ai', relative error estimate).
pub fn airy_asymptotic(x: f64) -> (f64, f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let (mut uk, mut su, mut sv) = (1.0f64, 1.0f64, 1.0f64);
    let mut last = f64::INFINITY;
    let mut sign = 1.0;
    let mut zk = 1.0;
    for k in 1..60u32 {
        let kf = k as f64;
        let next_u = uk * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let vk = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * next_u;
        zk *= zeta;
        sign = -sign;
        let size = next_u.abs() / zk;
        if size > last {
            break;
        }
        su += sign * next_u / zk;
        sv += sign * vk / zk;
        last = size;
        uk = next_u;
    }
    let pre = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt());
    (pre / x.powf(0.25) * su, -pre * x.powf(0.25) * sv, last)
}

/// Ai and Ai' in double precision from the Maclaurin series; for x ≥ 8 the asymptotic
/// series is evaluated as well and the two must agree within its truncation error.
pub fn airy(x: f64, policy: &PrecisionPolicy) -> Result<AiryEval> {
    policy.validate()?;
    let m = airy_mp(&Float::with_val(policy.bits, x), policy.bits)?;
    let (ai, ai_prime) = (m.ai.to_f64(), m.ai_prime.to_f64());
    if x >= ASYMPTOTIC_FROM {
        let (aa, ap, rel) = airy_asymptotic(x);
        let tol = 4.0 * rel + 1e-13;
        let gap = ((aa - ai) / ai).abs().max(((ap - ai_prime) / ai_prime).abs());
        if gap > tol {
            return Err(Error::Disagreement { what: format!("Airy series at x = {x}"), gap, tol });
        }
    }
    Ok(AiryEval { x, ai, ai_prime })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mpfr_ai(x: f64) -> f64 {
        Float::with_val(256, x).ai().to_f64()
    }

    #[test]
    fn value_at_origin() {
        let a = airy(0.0, &PrecisionPolicy::default()).unwrap();
        assert!((a.ai - 0.355_028_053_887_817_2).abs() < 1e-16);
        assert!((a.ai_prime + 0.258_819_403_792_806_8).abs() < 1e-16);
    }

    #[test]
    fn matches_library_airy() {
        let policy = PrecisionPolicy::default();
        for &x in &[-9.5, -5.0, -1.3, 0.7, 3.0, 8.0, 12.0, 20.0] {
            let a = airy(x, &policy).unwrap();
            let r = mpfr_ai(x);
            assert!(((a.ai - r) / r).abs() < 1e-13, "x={x}: {} vs {r}", a.ai);
        }
        // Ai(8) tabulated value
        assert!((airy(8.0, &policy).unwrap().ai / 4.692_207_616_099_2e-8 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn derivative_by_differences() {
        // Ai' against central differences of the library Ai at 256 bits
        let h = Float::with_val(256, 1e-20);
        for &x in &[-4.0, 0.5, 6.0] {
            let xp = Float::with_val(256, x) + &h;
            let xm = Float::with_val(256, x) - &h;
            let fd = (xp.ai() - xm.ai()) / (Float::with_val(256, &h) * 2u32);
            let m = airy_mp(&Float::with_val(256, x), 256).unwrap();
            assert!(Float::with_val(256, m.ai_prime - fd).abs() < 1e-30);
        }
    }

    #[test]
    fn residual_of_airy_equation() {
        // Ai'' − x·Ai by differences of the derivative
        let policy = PrecisionPolicy::default();
        let h = 1e-5;
        let mut x = -5.0;
        while x <= 8.0 {
            let p = airy(x + h, &policy).unwrap().ai_prime;
            let m = airy(x - h, &policy).unwrap().ai_prime;
            let res = (p - m) / (2.0 * h) - x * airy(x, &policy).unwrap().ai;
            assert!(res.abs() <= 1e-9, "x={x}: {res}");
            x += 0.25;
        }
    }

    #[test]
    fn positive_and_decreasing_on_right_axis() {
        let policy = PrecisionPolicy::default();
        let mut prev = f64::INFINITY;
        for i in 0..40 {
            let a = airy(i as f64 * 0.5, &policy).unwrap();
            assert!(a.ai > 0.0 && a.ai < prev && a.ai_prime < 0.0);
            prev = a.ai;
        }
    }

    #[test]
    fn tail_integral_matches_quadrature() {
        for &x in &[0.0, 2.0, 12.0] {
            let m = airy_mp(&Float::with_val(256, x), 256).unwrap();
            let q = quadrature::double_exponential::integrate(mpfr_ai, x, x + 40.0, 1e-14 * mpfr_ai(x)).integral;
            assert!((m.tail_int.to_f64() / q - 1.0).abs() < 1e-10, "x={x}");
        }
        let m = airy_mp(&Float::with_val(256, 0.0), 256).unwrap();
        assert!(Float::with_val(256, m.tail_int - Float::with_val(256, 1u32) / 3u32).abs() < 1e-70);
    }

    #[test]
    fn asymptotic_agrees_with_series() {
        for &x in &[9.0, 15.0, 30.0] {
            let (a, ap, rel) = airy_asymptotic(x);
            let m = airy_mp(&Float::with_val(256, x), 256).unwrap();
            assert!((a / m.ai.to_f64() - 1.0).abs() <= 4.0 * rel + 1e-13);
            assert!((ap / m.ai_prime.to_f64() - 1.0).abs() <= 4.0 * rel + 1e-13);
        }
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(airy(150.0, &PrecisionPolicy::default()).is_err());
    }
}
