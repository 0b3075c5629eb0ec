use super::moments::ToeplitzMoments;
use super::{check_odd, check_t, max_gap, PhiTable};
use crate::error::{Error, Result};
use crate::precision::PrecisionPolicy;
use rug::Float;

/// π_n(0) and N_n for n = 0..=n_max (π_0(0) = 1, N_0 = c_0).
#[derive(Clone, Debug)]
pub struct VerblunskyData {
    pub pi0: Vec<Float>,
    pub norms: Vec<Float>,
    pub n_max: usize,
}

/// Szegő recursion for monic polynomials orthogonal on the circle with respect
/// to a real even weight: π_{n+1}(z) = zπ_n(z) + π_{n+1}(0) π_n^*(z).
///
/// |π_n(0)| ≥ 1 or a nonpositive norm can only come from rounding and is
/// reported as precision exhaustion.
pub fn levinson(m: &ToeplitzMoments, n_max: usize) -> Result<VerblunskyData> {
    if m.k_max() < n_max {
        return Err(Error::Domain(format!("need Toeplitz coefficients up to {n_max}")));
    }
    let prec = m.prec;
    let c = &m.coeffs;
    // coefficients of π_n, constant term first
    let mut p: Vec<Float> = vec![Float::with_val(prec, 1u32)];
    let mut pi0 = vec![Float::with_val(prec, 1u32)];
    let mut norms = vec![c[0].clone()];
    for n in 0..n_max {
        let mut s = Float::new(prec);
        for (i, pi) in p.iter().enumerate() {
            s += Float::with_val(prec, pi * &c[i + 1]);
        }
        let alpha = -(s / &norms[n]);
        if Float::with_val(prec, alpha.abs_ref()) >= 1u32 {
            return Err(Error::PrecisionExhausted(format!("|π_{}(0)| ≥ 1 at {prec} bits", n + 1)));
        }
        let mut next = Vec::with_capacity(n + 2);
        for i in 0..=n + 1 {
            let mut v = if i > 0 { p[i - 1].clone() } else { Float::new(prec) };
            if i <= n {
                v += Float::with_val(prec, &alpha * &p[n - i]);
            }
            next.push(v);
        }
        let norm = Float::with_val(prec, 1u32 - Float::with_val(prec, &alpha * &alpha)) * &norms[n];
        if norm <= 0 {
            return Err(Error::PrecisionExhausted(format!("N_{} ≤ 0 at {prec} bits", n + 1)));
        }
        p = next;
        pi0.push(alpha);
        norms.push(norm);
    }
    Ok(VerblunskyData { pi0, norms, n_max })
}

/// Starting precision for the recursion; the recursion loses roughly 3.4N bits
/// on this weight, so the policy floor is raised for large N.
pub fn levinson_bits(n: u32, policy_bits: u32) -> u32 {
    let need = 4 * n + 128;
    policy_bits.max(need.div_ceil(64) * 64)
}

fn opuc_values(n: u32, t: f64, lp_max: usize, prec: u32) -> Result<Vec<Float>> {
    // The weight is 1/|(1−tz)^N|², so π_k(0) = 0 for k > N and N_k = 1 for k ≥ N:
    // the infinite product terminates exactly at index N.
    let n_max = n as usize + 2;
    let m = ToeplitzMoments::new(n, t, n_max, prec)?;
    let v = levinson(&m, n_max)?;
    let tiny = 2f64.powi(-(prec as i32) / 2);
    for k in n as usize + 1..=n_max {
        let a = v.pi0[k].to_f64().abs();
        let b = (v.norms[k].to_f64() - 1.0).abs();
        if a > tiny || b > tiny {
            return Err(Error::PrecisionExhausted(format!(
                "finite-length structure not reproduced at {prec} bits: |π_{k}(0)| = {a:e}, |N_{k} − 1| = {b:e}"
            )));
        }
    }
    let mut values = Vec::with_capacity(lp_max + 1);
    let mut acc = Float::with_val(prec, 1u32);
    let j_last = (n as usize).saturating_sub(2) / 2;
    let mut factors = Vec::new();
    for j in 0..=j_last.max(lp_max) {
        let idx = 2 * j + 2;
        let f = if idx <= n as usize {
            Float::with_val(prec, 1u32 - &v.pi0[idx]) / &v.norms[idx]
        } else {
            Float::with_val(prec, 1u32)
        };
        factors.push(f);
    }
    // values[l'] = Π_{j ≥ l'} factor_j, accumulated from the top
    let mut tail = vec![Float::with_val(prec, 1u32); factors.len() + 1];
    for j in (0..factors.len()).rev() {
        acc *= &factors[j];
        tail[j] = acc.clone();
    }
    values.extend_from_slice(&tail[..=lp_max]);
    Ok(values)
}

/// φ(N, l, t) for every odd l ≤ l_max via Π_{j ≥ (l−1)/2} (1 − π_{2j+2}(0))/N_{2j+2}.
pub fn phi_opuc_table(n: u32, t: f64, l_max: usize, policy: &PrecisionPolicy) -> Result<PhiTable> {
    check_t(t)?;
    policy.validate()?;
    let lp_max = check_odd(l_max)?;
    let start = policy.at_least(levinson_bits(n, policy.bits));
    let mut gap = 0.0;
    let (values, bits) = start.escalate(
        "circle route",
        |bits| opuc_values(n, t, lp_max, bits),
        |a, b| {
            gap = max_gap(a, b);
            gap
        },
    )?;
    Ok(PhiTable { n, t, bits, gap, values })
}

pub fn phi_opuc(n: u32, l_odd: usize, t: f64, policy: &PrecisionPolicy) -> Result<Float> {
    Ok(phi_opuc_table(n, t, l_odd, policy)?.values.pop().expect("nonempty table"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    /// Exact c_k for N = 2, t = 1/2: t^k [ (1+x)/(1−x)³ + k/(1−x)² ], x = t².
    fn c_exact(k: usize) -> BigRational {
        let x = r(1, 4);
        let one = BigRational::one();
        let a = (&one + &x) / ((&one - &x) * (&one - &x) * (&one - &x));
        let b = BigRational::from_integer(BigInt::from(k)) / ((&one - &x) * (&one - &x));
        (a + b) * r(1, 1i64 << k)
    }

    /// Monic π_n by solving the Toeplitz orthogonality system exactly.
    fn gram_schmidt(n: usize) -> (BigRational, BigRational) {
        if n == 0 {
            return (BigRational::one(), c_exact(0));
        }
        // rows j = 0..n: Σ_i a_i c_{|i−j|} = −c_{n−j}
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|j| {
                let mut row: Vec<BigRational> = (0..n).map(|i| c_exact(i.abs_diff(j))).collect();
                row.push(-c_exact(n - j));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero()).unwrap();
            m.swap(col, piv);
            let pv = m[col][col].clone();
            for x in m[col].iter_mut() {
                *x = &*x / &pv;
            }
            for row in 0..n {
                if row != col && !m[row][col].is_zero() {
                    let f = m[row][col].clone();
                    let src = m[col].clone();
                    for (x, s) in m[row].iter_mut().zip(src) {
                        *x = &*x - &f * s;
                    }
                }
            }
        }
        let a: Vec<BigRational> = (0..n).map(|i| m[i][n].clone()).collect();
        let norm = a.iter().enumerate().fold(c_exact(0), |acc, (i, ai)| acc + ai * c_exact(n - i));
        (a[0].clone(), norm)
    }

    /// Gap between the product at l = 1 and the Hankel prefactor.
    fn opuc_l1_matches_prefactor(n: u32, t: f64, prec: u32) -> Result<f64> {
        let v = opuc_values(n, t, 0, prec)?;
        Ok(Float::with_val(prec, &v[0] - super::super::hankel::phi_prefactor(n, t, prec)).abs().to_f64())
    }

    fn to_f64(x: &BigRational) -> f64 {
        use num_traits::ToPrimitive;
        x.to_f64().unwrap()
    }

    #[test]
    fn bernstein_szego_single_factor() {
        let m = ToeplitzMoments::new(1, 0.5, 10, 128).unwrap();
        let v = levinson(&m, 10).unwrap();
        assert!((v.pi0[1].to_f64() + 0.5).abs() < 1e-30);
        assert!((v.norms[0].to_f64() - 4.0 / 3.0).abs() < 1e-30);
        for n in 2..=10 {
            assert!(v.pi0[n].to_f64().abs() < 1e-30);
        }
        for n in 1..=10 {
            assert!((v.norms[n].to_f64() - 1.0).abs() < 1e-30);
        }
    }

    #[test]
    fn flat_weight() {
        let m = ToeplitzMoments::new(0, 0.5, 6, 128).unwrap();
        let v = levinson(&m, 6).unwrap();
        assert!(v.pi0[1..].iter().all(|x| x.is_zero()));
        assert!(v.norms.iter().all(|x| *x == 1u32));
    }

    #[test]
    fn matches_exact_gram_schmidt() {
        let m = ToeplitzMoments::new(2, 0.5, 12, 256).unwrap();
        for k in 0..=12 {
            assert!((m.coeffs[k].to_f64() - to_f64(&c_exact(k))).abs() < 1e-15);
        }
        let v = levinson(&m, 12).unwrap();
        for n in 0..=12 {
            let (p0, norm) = gram_schmidt(n);
            assert!((v.pi0[n].to_f64() - to_f64(&p0)).abs() < 1e-15, "n={n}");
            assert!((v.norms[n].to_f64() - to_f64(&norm)).abs() < 1e-15, "n={n}");
        }
    }

    #[test]
    fn norm_recurrence_holds() {
        let m = ToeplitzMoments::new(6, 0.7, 20, 256).unwrap();
        let v = levinson(&m, 20).unwrap();
        for n in 0..20 {
            let rhs = Float::with_val(256, 1u32 - Float::with_val(256, v.pi0[n + 1].square_ref())) * &v.norms[n];
            assert!(Float::with_val(256, &v.norms[n + 1] - rhs).abs() < 1e-60);
            assert!(v.norms[n] > 0);
        }
    }

    #[test]
    fn route_values() {
        let p = PrecisionPolicy::default();
        assert!((phi_opuc(1, 5, 0.5, &p).unwrap().to_f64() - 1.0).abs() < 1e-30);
        assert!((phi_opuc(4, 3, 0.5, &p).unwrap().to_f64() - 0.9375).abs() < 1e-15);
        assert!(opuc_l1_matches_prefactor(7, 0.4, 256).unwrap() < 1e-60);
        let t = phi_opuc_table(0, 0.5, 9, &p).unwrap();
        assert!(t.values.iter().all(|v| *v == 1u32));
    }

    #[test]
    fn precision_floor_scales_with_n() {
        assert_eq!(levinson_bits(2, 256), 256);
        assert_eq!(levinson_bits(300, 256), 1344);
    }
}
