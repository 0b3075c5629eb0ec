use crate::combinatorics::{b_inf, path_count_terms};
use crate::error::{Error, Result};
use crate::painleve::PIISolution;
use crate::precision::biguint_to_float;
use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;
use std::f64::consts::PI;

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("t must lie in (0, 1), got {t}")))
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ScalingConstants {
    pub t: f64,
    /// 2t/(1+t)
    pub eta: f64,
    /// (t(1−t))^{1/3}/(1+t)
    pub rho: f64,
}

pub fn scaling(t: f64) -> Result<ScalingConstants> {
    check_t(t)?;
    Ok(ScalingConstants { t, eta: 2.0 * t / (1.0 + t), rho: (t * (1.0 - t)).cbrt() / (1.0 + t) })
}

/// x = (l − ηN)/(ρN^{1/3}).
pub fn x_of(n: u32, t: f64, l: usize) -> Result<f64> {
    let s = scaling(t)?;
    let nf = n as f64;
    Ok((l as f64 - s.eta * nf) / (s.rho * nf.cbrt()))
}

/// l = [ηN + xρN^{1/3}], clamped at 0.
pub fn l_of(n: u32, t: f64, x: f64) -> Result<usize> {
    let s = scaling(t)?;
    let nf = n as f64;
    Ok((s.eta * nf + x * s.rho * nf.cbrt()).floor().max(0.0) as usize)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Support {
    Full,
    Gapped,
}

/// Equilibrium measure ψ(θ)dθ/2π on the unit circle for V(e^{iθ}) = γ log(1 + t² − 2t cos θ).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EquilibriumMeasure {
    pub gamma: f64,
    pub t: f64,
    pub regime: Support,
    /// Edge of the support |θ| ≤ θ_c (gapped only).
    pub theta_c: Option<f64>,
    /// Lagrange constant of the variational conditions; 0 with full support.
    pub lagrange_l: f64,
}

pub fn equilibrium(gamma: f64, t: f64) -> Result<EquilibriumMeasure> {
    check_t(t)?;
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("γ must be ≥ 0, got {gamma}")));
    }
    if gamma <= (1.0 + t) / (2.0 * t) {
        return Ok(EquilibriumMeasure { gamma, t, regime: Support::Full, theta_c: None, lagrange_l: 0.0 });
    }
    let s2 = (1.0 - t).powi(2) * (2.0 * gamma - 1.0) / (4.0 * t * (gamma - 1.0).powi(2));
    let theta_c = 2.0 * s2.sqrt().asin();
    let lagrange_l = 2.0 * gamma * ((2.0 * gamma - 1.0) * (1.0 - t) / (2.0 * (gamma - 1.0))).ln() - s2.ln();
    Ok(EquilibriumMeasure { gamma, t, regime: Support::Gapped, theta_c: Some(theta_c), lagrange_l })
}

impl EquilibriumMeasure {
    /// V(e^{iφ}).
    pub fn potential(&self, phi: f64) -> f64 {
        self.gamma * (1.0 + self.t * self.t - 2.0 * self.t * phi.cos()).ln()
    }

    fn s(&self) -> f64 {
        (self.theta_c.unwrap_or(PI) / 2.0).sin()
    }

    /// Density ψ(θ); zero in the gap.
    pub fn psi(&self, theta: f64) -> f64 {
        let (g, t) = (self.gamma, self.t);
        match self.regime {
            Support::Full => 1.0 - g + g * (1.0 - t * t) / (1.0 + t * t - 2.0 * t * theta.cos()),
            Support::Gapped => {
                let s = self.s();
                let h = (theta / 2.0).sin().abs();
                if h >= s {
                    return 0.0;
                }
                // √(S² − h²) as √((S−h)(S+h)) keeps relative accuracy near the edge
                let root = ((s - h) * (s + h)).sqrt();
                4.0 * (g - 1.0) * (theta / 2.0).cos() / ((1.0 - t).powi(2) / t + 4.0 * h * h) * root
            }
        }
    }

    /// ∫ f(θ) ψ(θ) dθ/2π over the support.
    ///
    /// In the gapped case sin(θ/2) = S sin φ turns ψ dθ into the smooth
    /// 8(γ−1)S² cos²φ/((1−t)²/t + 4S² sin²φ) dφ on |φ| ≤ π/2.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, tol: f64) -> f64 {
        let ig = |a: f64, b: f64, g: &dyn Fn(f64) -> f64| quadrature::double_exponential::integrate(g, a, b, tol).integral;
        match self.regime {
            // the peak at θ = 0 goes to an endpoint, where the nodes cluster
            Support::Full => (ig(-PI, 0.0, &|th| f(th) * self.psi(th)) + ig(0.0, PI, &|th| f(th) * self.psi(th))) / (2.0 * PI),
            Support::Gapped => {
                let s = self.s();
                let a = (1.0 - self.t).powi(2) / self.t;
                let g = self.gamma;
                let dens = |p: f64| {
                    let sp = s * p.sin();
                    let th = 2.0 * sp.asin();
                    f(th) * 8.0 * (g - 1.0) * s * s * p.cos().powi(2) / (a + 4.0 * sp * sp)
                };
                ig(-PI / 2.0, PI / 2.0, &dens) / (2.0 * PI)
            }
        }
    }

    /// (1/2π)∫ψ dθ.
    pub fn mass(&self) -> f64 {
        self.integrate(|_| 1.0, 1e-14)
    }

    /// 2∫log|e^{iφ} − s| dμ(s) − V(e^{iφ}) + l: zero on the support, negative in the gap.
    pub fn variational(&self, phi: f64) -> f64 {
        let log_dist = |th: f64| (2.0 * ((phi - th) / 2.0).sin().abs()).ln();
        let on_support = match self.theta_c {
            None => true,
            Some(tc) => phi.abs() < tc,
        };
        let energy = if on_support {
            // the logarithmic singularity sits inside the range: split there
            self.split_integral(phi, &log_dist)
        } else {
            self.integrate(log_dist, 1e-13)
        };
        2.0 * energy - self.potential(phi) + self.lagrange_l
    }

    fn split_integral(&self, phi: f64, f: &dyn Fn(f64) -> f64) -> f64 {
        let tol = 1e-13;
        let ig = |a: f64, b: f64, g: &dyn Fn(f64) -> f64| quadrature::double_exponential::integrate(g, a, b, tol).integral;
        match self.regime {
            Support::Full => {
                let mut cuts = [-PI, 0.0, phi, PI];
                cuts.sort_by(f64::total_cmp);
                cuts.windows(2).filter(|w| w[1] > w[0]).map(|w| ig(w[0], w[1], &|th| f(th) * self.psi(th))).sum::<f64>() / (2.0 * PI)
            }
            Support::Gapped => {
                let s = self.s();
                let a = (1.0 - self.t).powi(2) / self.t;
                let g = self.gamma;
                let dens = |p: f64| {
                    let sp = s * p.sin();
                    let th = 2.0 * sp.asin();
                    f(th) * 8.0 * (g - 1.0) * s * s * p.cos().powi(2) / (a + 4.0 * sp * sp)
                };
                let cut = ((phi / 2.0).sin() / s).asin();
                (ig(-PI / 2.0, cut, &dens) + ig(cut, PI / 2.0, &dens)) / (2.0 * PI)
            }
        }
    }
}

/// Thresholds separating the five regimes; the paper leaves them free.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RegimeThresholds {
    /// a < 1 for the lower side; its reciprocal is used above 1.
    pub a: f64,
    /// Half-width M of the critical window in x.
    pub m: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        Self { a: 0.9, m: 4.0 }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RhpPrediction {
    /// 1..=5 for cases (i)–(v).
    pub regime: u8,
    /// Ratio r = (2t/(1+t))·N/n and the scaled variable x with r = 1 − κx/n^{2/3}.
    pub r: f64,
    pub x: f64,
    pub predicted_norm_inv: f64,
    pub predicted_pi0: f64,
    /// Shape of the error bound with its unknown constants set to 1:
    /// e^{−n(1−r)}, n^{−1/3}e^{−x^{3/2}}, n^{−2/3}, 1/(rn − n) and 1/n in the five cases.
    pub error_scale: f64,
    /// In cases (iv)/(v) the norm prediction in scaled form: e^{−nl}N_{n−1}^{-1} ≈ sin(θ_c/2).
    pub scaled_norm_inv: Option<f64>,
}

/// κ with r = 1 − κx/n^{2/3}.
fn kappa(t: f64) -> f64 {
    ((1.0 - t) / (2.0 * (1.0 + t).powi(2))).cbrt()
}

/// [2(1+t)²/(1−t)]^{1/3}.
pub fn critical_constant(t: f64) -> f64 {
    (2.0 * (1.0 + t).powi(2) / (1.0 - t)).cbrt()
}

/// Scaled variable x for (n, N).
pub fn rhp_x(n: u32, big_n: f64, t: f64) -> f64 {
    let r = 2.0 * t / (1.0 + t) * big_n / n as f64;
    (1.0 - r) * (n as f64).powf(2.0 / 3.0) / kappa(t)
}

/// N (not rounded) giving the scaled variable x at degree n.
pub fn rhp_n_for_x(n: u32, t: f64, x: f64) -> f64 {
    n as f64 * (1.0 + t) / (2.0 * t) * (1.0 - kappa(t) * x / (n as f64).powf(2.0 / 3.0))
}

pub fn rhp_predict(n: u32, big_n: u32, t: f64, sol: &PIISolution) -> Result<RhpPrediction> {
    rhp_predict_with(n, big_n, t, sol, &RegimeThresholds::default())
}

/// Predicted π_n(0) and N_{n−1}^{-1} for the weight |1 − tz|^{−2N}.
///
/// Regime (iii) uses u and V = ∫_x^∞u² from `sol`; the paper's v is −V.
/// Case (iv) is read with the ratio (2t/(1+t))·N/n in the middle, like the other cases.
pub fn rhp_predict_with(n: u32, big_n: u32, t: f64, sol: &PIISolution, th: &RegimeThresholds) -> Result<RhpPrediction> {
    check_t(t)?;
    if n == 0 {
        return Err(Error::Domain("n must be ≥ 1".into()));
    }
    let nf = n as f64;
    let r = 2.0 * t / (1.0 + t) * big_n as f64 / nf;
    let x = rhp_x(n, big_n as f64, t);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let c = critical_constant(t);
    let flat = |regime: u8, error_scale: f64| RhpPrediction {
        regime,
        r,
        x,
        predicted_norm_inv: 1.0,
        predicted_pi0: 0.0,
        error_scale,
        scaled_norm_inv: None,
    };
    if x > th.m {
        return Ok(if r <= th.a { flat(1, (-nf * (1.0 - r)).exp()) } else { flat(2, (-x.powf(1.5)).exp() / nf.cbrt()) });
    }
    if x >= -th.m {
        let p = sol.eval(x)?;
        let v_paper = -p.v;
        return Ok(RhpPrediction {
            regime: 3,
            r,
            x,
            predicted_norm_inv: 1.0 + c * v_paper / nf.cbrt(),
            predicted_pi0: -sign * c * p.u / nf.cbrt(),
            error_scale: nf.powf(-2.0 / 3.0),
            scaled_norm_inv: None,
        });
    }
    let eq = equilibrium(big_n as f64 / nf, t)?;
    let half = eq.theta_c.ok_or_else(|| Error::Domain("expected a gapped equilibrium measure".into()))? / 2.0;
    let (regime, error_scale) = if r < 1.0 / th.a { (4, 1.0 / (r * nf - nf)) } else { (5, 1.0 / nf) };
    Ok(RhpPrediction {
        regime,
        r,
        x,
        predicted_norm_inv: (nf * eq.lagrange_l).exp() * half.sin(),
        predicted_pi0: sign * half.cos(),
        error_scale,
        scaled_norm_inv: Some(half.sin()),
    })
}

/// Natural log of a positive big integer.
pub fn ln_big(x: &BigUint) -> f64 {
    biguint_to_float(x, 128).ln().to_f64()
}

#[derive(Clone, Debug, Serialize)]
pub struct PathCountAsymptotic {
    pub n: u32,
    pub k: u64,
    pub t: f64,
    /// μ = k/N − t²N/(1−t²)
    pub mu: f64,
    /// log of the leading-order count, including the ½ from the parity constraint k − m even.
    pub log_value: f64,
    /// log of the formula as printed, without that ½.
    pub log_value_as_printed: f64,
    /// Centre tN/(1−t) of the m-window.
    pub m_center: f64,
}

impl PathCountAsymptotic {
    /// Inclusive range of m with |m − tN/(1−t)| ≤ N^{1/2+ε/2}.
    pub fn window(&self, eps: f64) -> (u64, u64) {
        let half = (self.n as f64).powf(0.5 + eps / 2.0);
        ((self.m_center - half).ceil().max(0.0) as u64, (self.m_center + half).floor().max(0.0) as u64)
    }

    /// Exact |P(N,k)| divided by the leading-order count.
    pub fn ratio_to_exact(&self) -> f64 {
        (ln_big(&crate::combinatorics::path_count(self.n, self.k)) - self.log_value).exp()
    }
}

pub fn path_count_asym(n: u32, k: u64, t: f64) -> Result<PathCountAsymptotic> {
    check_t(t)?;
    if n < 2 {
        return Err(Error::Domain("path-count asymptotics need N ≥ 2".into()));
    }
    let nf = n as f64;
    let w = t * t / (1.0 - t * t);
    let mu = k as f64 / nf - w * nf;
    if mu.abs() > nf.cbrt() {
        return Err(Error::Domain(format!("k = {k} is too far from t²N²/(1−t²) = {:.1}", w * nf * nf)));
    }
    let lt = t.ln();
    let num = -nf * nf * w * lt - mu * nf * lt - 0.25 * (mu * (1.0 - t * t) / t - 1.0).powi(2);
    let den = 0.5 * PI.ln() + (t * nf).ln() + nf * (1.0 - t).ln() + (nf * (nf - 1.0) / 2.0 - 1.0) * (1.0 - t * t).ln();
    let printed = num - den;
    Ok(PathCountAsymptotic {
        n,
        k,
        t,
        mu,
        log_value: printed - std::f64::consts::LN_2,
        log_value_as_printed: printed,
        m_center: t * nf / (1.0 - t),
    })
}

/// Share of |P(N,k)| carried by m in the concentration window, computed exactly.
pub fn window_mass(n: u32, k: u64, t: f64, eps: f64) -> Result<f64> {
    let asym = path_count_asym(n, k, t)?;
    let (lo, hi) = asym.window(eps);
    let terms = path_count_terms(n, k);
    let total: BigUint = terms.iter().map(|(_, a)| a).sum();
    let inside: BigUint = terms.iter().filter(|(m, _)| *m >= lo && *m <= hi).map(|(_, a)| a).sum();
    if inside == BigUint::from(0u32) {
        return Ok(0.0);
    }
    Ok((ln_big(&inside) - ln_big(&total)).exp())
}

/// a(m+2)/a(m) = (N+m+1)(N+m)(k−m) / ((m+2)(m+1)(N(N−1)+k−m−2)).
pub fn ratio_a(n: u32, k: u64, m: u64) -> Result<BigRational> {
    if k < 2 || m > k - 2 {
        return Err(Error::Domain(format!("need 0 ≤ m ≤ k − 2, got m = {m}, k = {k}")));
    }
    let (nn, m, k) = (n as u64, m, k);
    let num = BigUint::from(nn + m + 1) * BigUint::from(nn + m) * BigUint::from(k - m);
    let den = BigUint::from(m + 2) * BigUint::from(m + 1) * BigUint::from(nn * nn.saturating_sub(1) + k - m - 2);
    if den == BigUint::from(0u32) {
        return Err(Error::Domain("vanishing denominator".into()));
    }
    Ok(BigRational::new(num.into(), den.into()))
}

#[derive(Clone, Debug, Serialize)]
pub struct Unimodality {
    /// Ratios a(m+2)/a(m) strictly decrease along m ≡ k (mod 2).
    pub ratios_decreasing: bool,
    /// argmax of a(m) over admissible m.
    pub m_c: u64,
}

pub fn unimodality(n: u32, k: u64) -> Result<Unimodality> {
    let one = BigRational::from_integer(1.into());
    let mut prev: Option<BigRational> = None;
    let mut decreasing = true;
    let mut m_c = k % 2;
    let mut m = k % 2;
    while m + 2 <= k {
        let r = ratio_a(n, k, m)?;
        if let Some(p) = &prev {
            decreasing &= r < *p;
        }
        if r > one {
            m_c = m + 2;
        }
        prev = Some(r);
        m += 2;
    }
    Ok(Unimodality { ratios_decreasing: decreasing, m_c })
}

/// a(m) = b(N, (k−m)/2, m, ∞).
pub fn a_term(n: u32, k: u64, m: u64) -> BigUint {
    b_inf(n, (k - m) / 2, m)
}
