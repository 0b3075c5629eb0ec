use super::phi_hankel_table;
use crate::error::{Error, Result};
use crate::precision::PrecisionPolicy;
use rug::Float;
use serde::Serialize;

const PREC: u32 = 256;

/// Nonincreasing sequence in [0, 1]: explicit head values, then a constant tail.
#[derive(Clone, Debug)]
pub struct MonotoneSeq {
    values: Vec<f64>,
    tail: f64,
}

impl MonotoneSeq {
    pub fn new(values: Vec<f64>, tail: f64) -> Result<Self> {
        let all: Vec<f64> = values.iter().copied().chain(std::iter::once(tail)).collect();
        if all.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
            return Err(Error::NotMonotone("values must lie in [0, 1]".into()));
        }
        if let Some(i) = all.windows(2).position(|w| w[1] > w[0]) {
            return Err(Error::NotMonotone(format!("q_{} < q_{}", i, i + 1)));
        }
        Ok(Self { values, tail })
    }

    pub fn constant(v: f64) -> Result<Self> {
        Self::new(Vec::new(), v)
    }

    pub fn get(&self, j: u64) -> f64 {
        self.values.get(j as usize).copied().unwrap_or(self.tail)
    }
}

/// c_1 with (1−a)²c_1²/(2a) − 1 = d.
fn c1_for(a: f64, d: f64) -> f64 {
    (2.0 * a * (1.0 + d)).sqrt() / (1.0 - a)
}

/// Negative-binomial probabilities P(J = j) = (1−a)^r a^j binom(r+j−1, j), j = 0..=j_max.
fn nb_pmf(r: u64, a: &Float, j_max: u64) -> Vec<Float> {
    let prec = a.prec();
    let mut out = Vec::with_capacity(j_max as usize + 1);
    if r == 0 {
        out.push(Float::with_val(prec, 1u32));
        out.resize(j_max as usize + 1, Float::new(prec));
        return out;
    }
    let base = Float::with_val(prec, 1u32 - a);
    let mut f = Float::with_val(prec, base.ln_ref()) * r;
    f.exp_mut();
    for j in 0..=j_max {
        out.push(f.clone());
        f *= a;
        f *= r + j;
        f /= j + 1;
    }
    out
}

/// P(J ≤ j) for J with P(J = i) = (1−a)^r a^i binom(r+i−1, i).
pub fn nb_cdf(r: u64, a: f64, j: u64) -> f64 {
    let af = Float::with_val(PREC, a);
    nb_pmf(r, &af, j).iter().fold(Float::new(PREC), |acc, x| acc + x).to_f64().min(1.0)
}

/// G(N) with its bracket from a monotone sequence.
#[derive(Clone, Debug, Serialize)]
pub struct Depoissonized {
    pub g: f64,
    pub c1: f64,
    pub n_star: f64,
    pub n_star2: f64,
    /// (q_{N**}, q_{N*}) without slack.
    pub bracket: (f64, f64),
    /// Exact weight outside [N*, N**] on each side: P(J > N**), P(J < N*).
    pub slack: (f64, f64),
}

impl Depoissonized {
    /// Bracket with the exact tail masses in place of the uncontrolled C/N^d.
    pub fn rigorous(&self) -> (f64, f64) {
        ((self.bracket.0 - self.slack.0).max(0.0), (self.bracket.1 + self.slack.1).min(1.0))
    }
}

/// G(N) = (1−a)^N Σ_j a^j binom(N+j−1, j) q_j.
///
/// The weights sum to one, so the constant tail of q contributes exactly
/// tail·(1 − Σ_{head} f_j) and no truncation is involved.
pub fn depoisson_g(a: f64, n: u64, q: &MonotoneSeq, d: f64) -> Result<Depoissonized> {
    if !(a > 0.0 && a < 1.0) || n == 0 || !(d > 0.0) {
        return Err(Error::Domain(format!("need 0 < a < 1, N ≥ 1, d > 0; got a={a}, N={n}, d={d}")));
    }
    let c1 = c1_for(a, d);
    let nf = n as f64;
    let spread = c1 * (nf * nf.ln()).sqrt();
    let centre = a / (1.0 - a) * nf;
    let (n_star, n_star2) = (centre - spread, centre + spread);
    let j1 = n_star.ceil().max(0.0) as u64;
    let j2 = n_star2.floor().max(0.0) as u64;
    let j_max = (q.values.len() as u64).max(j2 + 1);
    let af = Float::with_val(PREC, a);
    let f = nb_pmf(n, &af, j_max);
    let mut g = Float::new(PREC);
    let mut head = Float::new(PREC);
    for (j, fj) in f.iter().enumerate().take(q.values.len()) {
        g += Float::with_val(PREC, fj * q.values[j]);
        head += fj;
    }
    g += Float::with_val(PREC, 1u32 - &head) * q.tail;
    let below: Float = f.iter().take(j1 as usize).fold(Float::new(PREC), |acc, x| acc + x);
    let upto: Float = f.iter().take(j2 as usize + 1).fold(Float::new(PREC), |acc, x| acc + x);
    let above = Float::with_val(PREC, 1u32 - upto).to_f64().max(0.0);
    Ok(Depoissonized {
        g: g.to_f64(),
        c1,
        n_star,
        n_star2,
        bracket: (q.get(j2), q.get(j1)),
        slack: (above, below.to_f64()),
    })
}

/// Index pairs μ±(N), ν±(N) of the two-parameter sandwich at fixed (t, β).
#[derive(Clone, Debug, Serialize)]
pub struct LemmaIndices {
    pub c0_j: f64,
    pub c0_m: f64,
    pub mu_plus: i64,
    pub mu_minus: i64,
    pub nu_plus: i64,
    pub nu_minus: i64,
}

/// μ± = [t²N²/(2(1−t²)) ± c_0 N√log N], ν± = [βtN/(1−βt) ± c_0 √(N log N)], with
/// c_0 chosen per index from the one-dimensional lemma at decay order d.
pub fn lemma_indices(n: u32, t: f64, beta: f64, d: f64) -> Result<LemmaIndices> {
    if !(t > 0.0 && t < 1.0 && beta > 0.0 && beta * t < 1.0 && n >= 1) {
        return Err(Error::Domain(format!("need N ≥ 1, 0 < t < 1, 0 < βt < 1; got t={t}, β={beta}")));
    }
    let nf = n as f64;
    let ln = nf.ln();
    let c0_j = c1_for(t * t, d);
    let c0_m = c1_for(beta * t, d);
    let mu = t * t * nf * nf / (2.0 * (1.0 - t * t));
    let nu = beta * t * nf / (1.0 - beta * t);
    Ok(LemmaIndices {
        c0_j,
        c0_m,
        mu_plus: (mu + c0_j * nf * ln.sqrt()).floor() as i64,
        mu_minus: (mu - c0_j * nf * ln.sqrt()).floor() as i64,
        nu_plus: (nu + c0_m * (nf * ln).sqrt()).floor() as i64,
        nu_minus: (nu - c0_m * (nf * ln).sqrt()).floor() as i64,
    })
}

/// Bracket for p(N, j, m, l) = b(N,j,m,l)/b(N,j,m,∞) at j = (k−m)/2.
#[derive(Clone, Debug, Serialize)]
pub struct SandwichBounds {
    pub j: u64,
    pub m: u64,
    /// Rigorous bracket using exact negative-binomial tail masses.
    pub lower: f64,
    pub upper: f64,
    /// φ at the shifted parameters, i.e. the bracket before any slack.
    pub phi_lower: f64,
    pub phi_upper: f64,
    /// (t̃, β̃) used for each side; None when the side falls back to a trivial bound.
    pub params_lower: Option<(f64, f64)>,
    pub params_upper: Option<(f64, f64)>,
    /// The lemma's C/N^d is not quantified; the exact tail masses replace it.
    pub slack_note: &'static str,
}

/// Shifted parameters: t̃² = (k−m ∓ 2c N√log N)/(N² + k−m ∓ 2c N√log N) and
/// β̃t̃ = (m ∓ c√(N log N))/(N + m ∓ c√(N log N)).
fn shifted(n: f64, k: f64, m: f64, dj: f64, dm: f64) -> Option<(f64, f64)> {
    let s = (k - m + dj) / (n * n + k - m + dj);
    let u = ((m + dm) / (n + m + dm)).max(0.0);
    if !(s > 0.0 && s < 1.0 && u < 1.0) {
        return None;
    }
    let t = s.sqrt();
    Some((t, u / t))
}

/// Two-sided bracket on p(N, (k−m)/2, m, l) from φ at shifted parameters.
///
/// With J ~ NB(N(N−1)/2, t̃²) and M ~ NB(N, β̃t̃) independent, φ = E p(J, M), and p
/// is nonincreasing in both indices. Hence p(j,m) ≤ φ/P(J ≤ j, M ≤ m) and
/// p(j,m) ≥ φ − P(J < j or M < m); means are pushed below (resp. above) (j, m).
/// For even l the monotonicity bracket φ(l−1) ≤ φ(l) ≤ φ(l+1) is used.
pub fn sandwich_bounds(n: u32, k: u64, m: u64, l: usize, d: f64, policy: &PrecisionPolicy) -> Result<SandwichBounds> {
    if m > k || (k - m) % 2 == 1 {
        return Err(Error::Domain(format!("m = {m} is not admissible for k = {k}")));
    }
    if n == 0 || !(d > 0.0) {
        return Err(Error::Domain("need N ≥ 1 and d > 0".into()));
    }
    let j = (k - m) / 2;
    let b = n as u64 * (n as u64 - 1) / 2;
    if b == 0 && j > 0 {
        return Err(Error::Domain(format!("no configurations with N = 1 and j = {j}")));
    }
    let nf = n as f64;
    let ln = nf.ln();
    let tk2 = k as f64 / (nf * nf + k as f64);
    let c0_j = c1_for(tk2.clamp(1e-12, 1.0 - 1e-12), d);
    let c0_m = c1_for((m as f64 / (nf + m as f64)).clamp(1e-12, 1.0 - 1e-12), d);
    let dj = 2.0 * c0_j * nf * ln.sqrt();
    let dm = c0_m * (nf * ln).sqrt();

    let phi_at = |t: f64, l: usize| -> Result<f64> {
        let odd = if l % 2 == 1 { l } else { l + 1 };
        let table = phi_hankel_table(n, t, odd, policy)?;
        Ok(table.bracket(l).map(|(lo, hi)| if l % 2 == 1 { lo } else { hi }).unwrap_or(1.0))
    };
    let phi_lo_at = |t: f64| -> Result<f64> {
        if l % 2 == 1 {
            phi_at(t, l)
        } else if l == 0 {
            Ok(0.0)
        } else {
            phi_at(t, l - 1)
        }
    };

    let params_upper = shifted(nf, k as f64, m as f64, -dj, -dm);
    let (phi_upper, upper) = match params_upper {
        Some((t, beta)) => {
            let phi = phi_at(t, l)?;
            let pj = nb_cdf(b, t * t, j);
            let pm = nb_cdf(n as u64, beta * t, m);
            (phi, (phi / (pj * pm)).min(1.0))
        }
        None => (1.0, 1.0),
    };
    let params_lower = shifted(nf, k as f64, m as f64, dj, dm);
    let (phi_lower, lower) = match params_lower {
        Some((t, beta)) => {
            let phi = phi_lo_at(t)?;
            let pj = if j == 0 { 1.0 } else { 1.0 - nb_cdf(b, t * t, j - 1) };
            let pm = if m == 0 { 1.0 } else { 1.0 - nb_cdf(n as u64, beta * t, m - 1) };
            (phi, (phi - (1.0 - pj * pm)).max(0.0))
        }
        None => (0.0, 0.0),
    };
    Ok(SandwichBounds {
        j,
        m,
        lower,
        upper,
        phi_lower,
        phi_upper,
        params_lower,
        params_upper,
        slack_note: "C/N^d is uncontrolled in the lemma; exact negative-binomial tail masses are used instead",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{b_exact, b_inf};
    use num_traits::ToPrimitive;

    #[test]
    fn constant_sequences() {
        let one = depoisson_g(0.3, 17, &MonotoneSeq::constant(1.0).unwrap(), 2.0).unwrap();
        assert_eq!(one.g, 1.0);
        let zero = depoisson_g(0.3, 17, &MonotoneSeq::constant(0.0).unwrap(), 2.0).unwrap();
        assert_eq!(zero.g, 0.0);
    }

    #[test]
    fn rejects_increasing_sequence() {
        assert!(matches!(MonotoneSeq::new(vec![0.5, 0.7], 0.1), Err(Error::NotMonotone(_))));
        assert!(MonotoneSeq::new(vec![1.0, 0.5], 0.6).is_err());
        assert!(MonotoneSeq::new(vec![1.2], 0.0).is_err());
    }

    #[test]
    fn step_sequence_bracket() {
        let (a, n, d) = (0.5, 200u64, 2.0);
        let cut = (a / (1.0 - a) * n as f64).floor() as usize;
        let q = MonotoneSeq::new(vec![1.0; cut + 1], 0.0).unwrap();
        let r = depoisson_g(a, n, &q, d).unwrap();
        // direct summation oracle in f64 log space
        let mut direct = 0.0;
        for j in 0..=cut {
            let lf = n as f64 * (1.0 - a).ln() + j as f64 * a.ln() + ln_binom(n + j as u64 - 1, j as u64);
            direct += lf.exp();
        }
        assert!((r.g - direct).abs() < 1e-12);
        let (lo, hi) = r.rigorous();
        assert!(lo <= r.g && r.g <= hi);
        let cn = (n as f64).powf(-d);
        assert!(r.slack.0 <= cn && r.slack.1 <= cn);
        assert!(r.bracket.0 - cn <= r.g && r.g <= r.bracket.1 + cn);
    }

    fn ln_binom(n: u64, k: u64) -> f64 {
        (1..=k).map(|i| ((n - k + i) as f64).ln() - (i as f64).ln()).sum()
    }

    #[test]
    fn indices_are_ordered() {
        let ix = lemma_indices(100, 0.5, 1.0, 2.0).unwrap();
        assert!(ix.mu_minus < ix.mu_plus && ix.nu_minus < ix.nu_plus);
        assert!(lemma_indices(10, 0.5, 2.5, 1.0).is_err());
    }

    #[test]
    fn brackets_contain_exact_ratios() {
        let policy = PrecisionPolicy::default();
        for n in 1..=3u32 {
            for k in 0..=6u64 {
                for m in (k % 2..=k).step_by(2) {
                    let j = (k - m) / 2;
                    let binf = b_inf(n, j, m);
                    if binf == 0u32.into() {
                        continue;
                    }
                    for l in 0..=4usize {
                        let p = b_exact(n, j, m, Some(l)).unwrap().to_f64().unwrap() / binf.to_f64().unwrap();
                        let s = sandwich_bounds(n, k, m, l, 1.0, &policy).unwrap();
                        assert!(s.lower <= s.upper);
                        assert!(s.lower - 1e-12 <= p && p <= s.upper + 1e-12, "N={n} k={k} m={m} l={l}: {p} vs {s:?}");
                    }
                }
            }
        }
    }
}
