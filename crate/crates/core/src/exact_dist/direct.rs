use crate::combinatorics::{b_inf, partitions_of, EnumerationBudget};
use crate::error::{Error, Result};
use crate::precision::biguint_to_float;
use rug::Float;

/// Truncated tableau sum for φ with a certified bound on everything dropped.
#[derive(Clone, Debug)]
pub struct DirectSum {
    /// Partial sum over |λ| ≤ cutoff; a lower bound for φ.
    pub value: f64,
    /// φ − value lies in [0, tail_bound].
    pub tail_bound: f64,
    pub cutoff: u32,
}

impl DirectSum {
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        x >= self.value - slack && x <= self.value + self.tail_bound + slack
    }
}

/// (1−t²)^{N(N−1)/2}(1−βt)^N Σ_{ℓ(λ)≤l, |λ|≤cutoff} t^{|λ|} β^{f(λ')} d_λ(N).
///
/// The dropped mass is bounded by the same sum without the row restriction, whose
/// total is known in closed form: 1 − prefactor·Σ_{2j+m≤cutoff} t^{2j}(βt)^m b(N,j,m,∞).
pub fn phi_direct_sum(
    n: u32,
    l: usize,
    t: f64,
    beta: f64,
    cutoff: u32,
    budget: &EnumerationBudget,
) -> Result<DirectSum> {
    if !(t > 0.0 && t < 1.0 && beta >= 0.0 && beta * t < 1.0) {
        return Err(Error::Domain(format!("need 0 < t < 1 and 0 ≤ βt < 1, got t={t}, β={beta}")));
    }
    if n == 0 {
        return Ok(DirectSum { value: 1.0, tail_bound: 0.0, cutoff });
    }
    if cutoff > budget.max_size || n > budget.max_entry {
        return Err(Error::Budget(format!("cutoff {cutoff} or N={n} exceeds the enumeration budget")));
    }
    let prec = 256;
    let tf = Float::with_val(prec, t);
    let bt = Float::with_val(prec, &tf * beta);
    let bf = Float::with_val(prec, beta);
    let b_exp = n as u64 * (n as u64 - 1) / 2;
    let mut pre = Float::with_val(prec, 1u32 - Float::with_val(prec, &tf * &tf));
    pre = pow_u64(&pre, b_exp) * pow_u64(&Float::with_val(prec, 1u32 - &bt), n as u64);

    let mut partial = Float::new(prec);
    let mut full = Float::new(prec);
    for s in 0..=cutoff {
        let ts = pow_u64(&tf, s as u64);
        for lambda in partitions_of(s, Some(l.min(n as usize))) {
            let d = budget.ssyt_count(&lambda, n)?;
            let w = Float::with_val(prec, &ts * pow_u64(&bf, lambda.odd_columns() as u64));
            partial += w * biguint_to_float(&d, prec);
        }
        for m in (s as u64 % 2..=s as u64).step_by(2) {
            let j = (s as u64 - m) / 2;
            let w = Float::with_val(prec, pow_u64(&tf, 2 * j) * pow_u64(&bt, m));
            let b = b_inf(n, j, m);
            full += w * biguint_to_float(&b, prec);
        }
    }
    let value = Float::with_val(prec, &pre * &partial).to_f64();
    let tail = Float::with_val(prec, 1u32 - Float::with_val(prec, &pre * &full)).to_f64().max(0.0);
    Ok(DirectSum { value, tail_bound: tail, cutoff })
}

fn pow_u64(x: &Float, mut e: u64) -> Float {
    let prec = x.prec();
    let mut acc = Float::with_val(prec, 1u32);
    let mut base = x.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = Float::with_val(prec, &base * &base);
        e >>= 1;
    }
    acc
}
