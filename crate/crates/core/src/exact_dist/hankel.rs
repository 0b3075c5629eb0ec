use super::moments::ToeplitzMoments;
use super::{check_odd, check_t, max_gap, PhiTable};
use crate::error::{Error, Result};
use crate::precision::PrecisionPolicy;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer};

/// Hankel moment matrix H_l = (h_{j+k})_{0≤j,k<l}, stored by anti-diagonal.
#[derive(Clone, Debug)]
pub struct MomentMatrix {
    pub l: usize,
    /// h[p] for p = 0..=2l−2
    pub h: Vec<Float>,
}

impl MomentMatrix {
    pub fn entry(&self, j: usize, k: usize) -> &Float {
        &self.h[j + k]
    }

    /// LDLᵀ pivots D_0..D_{l−1}; det of the leading i×i minor is Π_{k<i} D_k.
    /// A nonpositive pivot means the working precision is exhausted.
    pub fn pivots(&self) -> Result<Vec<Float>> {
        let l = self.l;
        let prec = self.h.first().map_or(64, Float::prec);
        let mut lower = vec![vec![Float::new(prec); l]; l];
        let mut d: Vec<Float> = Vec::with_capacity(l);
        for i in 0..l {
            let mut di = self.entry(i, i).clone();
            for k in 0..i {
                let t = Float::with_val(prec, &lower[i][k] * &lower[i][k]);
                di -= t * &d[k];
            }
            if di <= 0 {
                return Err(Error::PrecisionExhausted(format!("Hankel pivot {i} is not positive at {prec} bits")));
            }
            for j in i + 1..l {
                let mut s = self.entry(j, i).clone();
                for k in 0..i {
                    let t = Float::with_val(prec, &lower[j][k] * &lower[i][k]);
                    s -= t * &d[k];
                }
                lower[j][i] = s / &di;
            }
            d.push(di);
        }
        Ok(d)
    }
}

/// Coefficient of cos(mθ) in 2^p cos^p θ.
fn cos_power_mode(p: usize, m: usize) -> Integer {
    if m > p || (p - m) % 2 == 1 {
        return Integer::new();
    }
    let b = Integer::from(Integer::binomial_u(p as u32, ((p - m) / 2) as u32));
    if m > 0 {
        b * 2u32
    } else {
        b
    }
}

/// h_p for p = 0..=p_max by pairing cosine modes of x^p(1−x²) with the Toeplitz
/// coefficients: h_p = ½ Σ_m (4e_m(p) − e_m(p+2)) c_m, where
/// 2^p cos^p θ = Σ_m e_m(p) cos mθ.
pub fn cosine_mode_moments(c: &ToeplitzMoments, p_max: usize) -> Result<Vec<Float>> {
    if c.k_max() < p_max + 2 {
        return Err(Error::Domain(format!("need Toeplitz coefficients up to {}", p_max + 2)));
    }
    let prec = c.prec;
    let mut out = Vec::with_capacity(p_max + 1);
    for p in 0..=p_max {
        let mut acc = Float::new(prec);
        for m in 0..=p + 2 {
            let w = cos_power_mode(p, m) * 4u32 - cos_power_mode(p + 2, m);
            if w != 0 {
                acc += Float::with_val(prec, &c.coeffs[m] * &w);
            }
        }
        out.push(acc / 2u32);
    }
    Ok(out)
}

fn chebyshev_u_rule(n: usize, n_weight: u32, t: &Float, p_max: usize, prec: u32) -> Vec<Float> {
    // nodes cos(iπ/(n+1)), weights π/(n+1)·sin²; the π cancels against 2^{p+1}/π
    let pi = Float::with_val(prec, Constant::Pi);
    let t2p1 = Float::with_val(prec, t * t) + 1u32;
    let mut acc = vec![Float::new(prec); p_max + 1];
    for i in 1..=n {
        let theta = Float::with_val(prec, &pi * i as u32) / (n as u32 + 1);
        let (s, x) = theta.sin_cos(Float::new(prec));
        let base = Float::with_val(prec, &t2p1 - Float::with_val(prec, t * &x) * 2u32);
        let f = Float::with_val(prec, (&base).pow(-(n_weight as i32)));
        let mut v = Float::with_val(prec, &s * &s) * f;
        for a in acc.iter_mut() {
            *a += &v;
            v *= &x;
        }
    }
    for (p, a) in acc.iter_mut().enumerate() {
        *a <<= p as u32 + 1;
        *a /= n as u32 + 1;
    }
    acc
}

/// h_p for p = 0..=p_max by Gauss–Chebyshev quadrature of the second kind, with
/// the node count doubled until successive rules agree to working precision.
pub fn quadrature_moments(n: u32, t: f64, p_max: usize, prec: u32) -> Result<Vec<Float>> {
    check_t(t)?;
    let tf = Float::with_val(prec, t);
    let mut nodes = 31usize;
    let mut prev = chebyshev_u_rule(nodes, n, &tf, p_max, prec);
    let rel = (2f64).powi(-(prec as i32) + 16);
    while nodes < 1 << 16 {
        nodes = 2 * nodes + 1;
        let cur = chebyshev_u_rule(nodes, n, &tf, p_max, prec);
        let scale0 = cur[0].to_f64().abs();
        let converged = prev.iter().zip(&cur).enumerate().all(|(p, (a, b))| {
            Float::with_val(prec, a - b).abs().to_f64() <= rel * scale0 * 2f64.powi(p as i32)
        });
        if converged {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::PrecisionExhausted(format!("Gauss–Chebyshev moments for N={n}, t={t} did not converge")))
}

/// Largest gap between two moment lists relative to the scale 2^p·h_0.
fn moment_gap(a: &[Float], b: &[Float]) -> f64 {
    let scale0 = a[0].to_f64().abs();
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(p, (x, y))| Float::with_val(x.prec(), x - y).abs().to_f64() / (scale0 * 2f64.powi(p as i32)))
        .fold(0.0, f64::max)
}

fn verified_moments(n: u32, t: f64, p_max: usize, prec: u32, rel_tol: f64) -> Result<Vec<Float>> {
    let c = ToeplitzMoments::new(n, t, p_max + 2, prec)?;
    let a = cosine_mode_moments(&c, p_max)?;
    let b = quadrature_moments(n, t, p_max, prec)?;
    let gap = moment_gap(&a, &b);
    if gap > rel_tol {
        return Err(Error::Disagreement { what: "Hankel moments: mode pairing vs quadrature".into(), gap, tol: rel_tol });
    }
    Ok(a)
}

/// h_{jk}(N, t), cross-checked between the mode-pairing and quadrature evaluators.
pub fn hankel_moment(n: u32, t: f64, j: usize, k: usize, policy: &PrecisionPolicy) -> Result<Float> {
    policy.validate()?;
    let p = j + k;
    let (h, _) = policy.escalate(
        "Hankel moment",
        |bits| Ok(verified_moments(n, t, p, bits, policy.target_tol)?.swap_remove(p)),
        |a, b| Float::with_val(a.prec(), a - b).abs().to_f64(),
    )?;
    Ok(h)
}

fn prefactor(n: u32, t: &Float, prec: u32) -> Float {
    let e = n as u64 * (n as u64).saturating_sub(1) / 2;
    let one_minus = Float::with_val(prec, 1u32 - Float::with_val(prec, t * t));
    let mut acc = Float::with_val(prec, 1u32);
    // binary powering with an unbounded exponent
    let mut base = one_minus;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = Float::with_val(prec, &base * &base);
        e >>= 1;
    }
    acc
}

pub(crate) fn phi_prefactor(n: u32, t: f64, prec: u32) -> Float {
    prefactor(n, &Float::with_val(prec, t), prec)
}

fn hankel_values(n: u32, t: f64, lp_max: usize, prec: u32) -> Result<Vec<Float>> {
    let pre = phi_prefactor(n, t, prec);
    let mut values = vec![pre.clone()];
    if lp_max == 0 {
        return Ok(values);
    }
    let p_max = 2 * lp_max - 2;
    let h = verified_moments(n, t, p_max, prec, 2f64.powi(-(prec as i32) / 2))?;
    let d = MomentMatrix { l: lp_max, h }.pivots()?;
    let mut det = Float::with_val(prec, 1u32);
    for di in &d {
        det *= di;
        values.push(Float::with_val(prec, &pre * &det));
    }
    Ok(values)
}

/// φ(N, l, t) for every odd l ≤ l_max via (1−t²)^{N(N−1)/2} det H_{(l−1)/2}.
pub fn phi_hankel_table(n: u32, t: f64, l_max: usize, policy: &PrecisionPolicy) -> Result<PhiTable> {
    check_t(t)?;
    policy.validate()?;
    let lp_max = check_odd(l_max)?;
    let mut gap = 0.0;
    let (values, bits) = policy.escalate(
        "Hankel route",
        |bits| hankel_values(n, t, lp_max, bits),
        |a, b| {
            gap = max_gap(a, b);
            gap
        },
    )?;
    Ok(PhiTable { n, t, bits, gap, values })
}

pub fn phi_hankel(n: u32, l_odd: usize, t: f64, policy: &PrecisionPolicy) -> Result<Float> {
    Ok(phi_hankel_table(n, t, l_odd, policy)?.values.pop().expect("nonempty table"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalan(n: u64) -> u64 {
        (0..n).fold(1u64, |c, i| c * 2 * (2 * i + 1) / (i + 2))
    }

    #[test]
    fn flat_weight_gives_catalan_numbers() {
        let c = ToeplitzMoments::new(0, 0.5, 22, 128).unwrap();
        let a = cosine_mode_moments(&c, 20).unwrap();
        let b = quadrature_moments(0, 0.5, 20, 128).unwrap();
        for p in 0..=20 {
            let expect = if p % 2 == 0 { catalan(p as u64 / 2) } else { 0 };
            assert_eq!(a[p], expect, "p={p}");
            assert!(Float::with_val(128, &b[p] - expect).abs() < 1e-25, "p={p}");
        }
    }

    #[test]
    fn evaluators_agree_at_128_bits() {
        let p = PrecisionPolicy::new(128, 1e-20, 0).unwrap();
        let c = ToeplitzMoments::new(3, 0.5, 4, 128).unwrap();
        let a = cosine_mode_moments(&c, 2).unwrap();
        let b = quadrature_moments(3, 0.5, 2, 128).unwrap();
        assert!(Float::with_val(128, &a[2] - &b[2]).abs() < 1e-20);
        let p2 = PrecisionPolicy { max_escalations: 1, ..p };
        let h = hankel_moment(3, 0.5, 1, 1, &p2).unwrap();
        assert!(Float::with_val(128, &h - &a[2]).abs() < 1e-20);
    }

    #[test]
    fn trivial_determinant() {
        let policy = PrecisionPolicy::default();
        for n in [1u32, 2, 5, 9] {
            for t in [0.3, 0.5, 0.7] {
                let v = phi_hankel(n, 1, t, &policy).unwrap().to_f64();
                let e = (1.0 - t * t).powi((n * (n - 1) / 2) as i32);
                assert!((v - e).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn single_walker_is_certain() {
        let table = phi_hankel_table(1, 0.6, 25, &PrecisionPolicy::default()).unwrap();
        for v in &table.values {
            assert!(Float::with_val(256, v - 1u32).abs() < 1e-30);
        }
    }

    #[test]
    fn small_case_value() {
        // frozen from an independent mpmath quadrature of the moment integrals
        let v = phi_hankel(4, 3, 0.5, &PrecisionPolicy::default()).unwrap();
        assert!((v.to_f64() - 0.9375).abs() < 1e-15);
        // at most N rows are possible, so φ = 1 once l ≥ N
        let v = phi_hankel(4, 7, 0.5, &PrecisionPolicy::default()).unwrap();
        assert!((v.to_f64() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn monotone_in_l_and_bounded() {
        let table = phi_hankel_table(8, 0.5, 41, &PrecisionPolicy::default()).unwrap();
        for w in table.values.windows(2) {
            // once l ≥ N every value is 1 up to rounding
            assert!(w[0].to_f64() <= w[1].to_f64() + 1e-40, "{} > {}", w[0], w[1]);
        }
        assert!(table.values.iter().all(|v| *v >= 0 && Float::with_val(256, v - 1u32) < 1e-40));
        assert!((table.values.last().unwrap().to_f64() - 1.0).abs() < 1e-12);
        assert_eq!(table.bracket(4).map(|(a, b)| a <= b), Some(true));
        assert!(table.odd(4).is_none());
    }

    #[test]
    fn even_l_rejected() {
        assert!(phi_hankel(3, 4, 0.5, &PrecisionPolicy::default()).is_err());
    }
}
