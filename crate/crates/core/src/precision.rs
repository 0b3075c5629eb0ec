use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Working precision and acceptance rule for high-precision evaluations.
///
/// A result is accepted once two consecutive precision levels agree within
/// `target_tol`; each escalation doubles `bits`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub bits: u32,
    pub target_tol: f64,
    pub max_escalations: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self { bits: 256, target_tol: 1e-24, max_escalations: 4 }
    }
}

impl PrecisionPolicy {
    pub fn new(bits: u32, target_tol: f64, max_escalations: u32) -> Result<Self> {
        let p = Self { bits, target_tol, max_escalations };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.bits < 64 {
            return Err(Error::Domain(format!("precision {} bits is below 64", self.bits)));
        }
        if !(self.target_tol > 0.0) {
            return Err(Error::Domain(format!("target tolerance {} must be positive", self.target_tol)));
        }
        Ok(())
    }

    /// Precision levels tried in order: bits, 2·bits, ... (1 + max_escalations levels).
    pub fn levels(&self) -> impl Iterator<Item = u32> {
        let b = self.bits;
        (0..=self.max_escalations).map(move |i| b.saturating_mul(1 << i.min(16)))
    }

    /// Same policy starting at a higher precision.
    pub fn at_least(&self, bits: u32) -> Self {
        Self { bits: self.bits.max(bits), ..*self }
    }

    /// Evaluate `f` at successive precisions until two consecutive levels agree.
    ///
    /// `f` may fail at a level (for example on loss of positive definiteness);
    /// such failures trigger escalation. Returns the value at the finer of the
    /// two agreeing levels together with that level's bit count.
    pub fn escalate<T, F, D>(&self, what: &str, mut f: F, mut dist: D) -> Result<(T, u32)>
    where
        F: FnMut(u32) -> Result<T>,
        D: FnMut(&T, &T) -> f64,
    {
        let mut prev: Option<T> = None;
        let mut last_gap = f64::INFINITY;
        let mut last_err = None;
        for bits in self.levels() {
            match f(bits) {
                Ok(v) => {
                    if let Some(p) = &prev {
                        last_gap = dist(p, &v);
                        if last_gap <= self.target_tol {
                            return Ok((v, bits));
                        }
                    }
                    prev = Some(v);
                }
                Err(e @ (Error::PrecisionExhausted(_) | Error::Disagreement { .. })) => {
                    prev = None;
                    last_err = Some(e);
                }
                Err(e) => return Err(e),
            }
        }
        if last_gap.is_finite() {
            Err(Error::Disagreement { what: format!("{what}: consecutive precision levels"), gap: last_gap, tol: self.target_tol })
        } else {
            Err(last_err.unwrap_or_else(|| Error::PrecisionExhausted(what.to_string())))
        }
    }
}

/// Exact big integer rounded to a float of the given precision.
pub fn biguint_to_float(x: &num_bigint::BigUint, prec: u32) -> rug::Float {
    let digits = x.to_u64_digits();
    rug::Float::with_val(prec, rug::Integer::from_digits(&digits, rug::integer::Order::Lsf))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_integer_conversion() {
        let x = num_bigint::BigUint::from(3u32).pow(200);
        let f = biguint_to_float(&x, 512);
        let y = rug::Float::with_val(512, rug::Float::u_pow_u(3, 200));
        assert_eq!(f, y);
    }

    #[test]
    fn levels_double() {
        let p = PrecisionPolicy::default();
        assert_eq!(p.levels().collect::<Vec<_>>(), vec![256, 512, 1024, 2048, 4096]);
    }

    #[test]
    fn rejects_low_precision() {
        assert!(PrecisionPolicy::new(32, 1e-10, 1).is_err());
    }

    #[test]
    fn escalation_stops_on_agreement() {
        let p = PrecisionPolicy::new(64, 1e-6, 4).unwrap();
        let (v, bits) = p.escalate("demo", |b| Ok(1.0 + 2f64.powi(-(b as i32) / 8)), |a, b| (a - b).abs()).unwrap();
        assert_eq!(bits, 512);
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn escalation_reports_exhaustion() {
        let p = PrecisionPolicy::new(64, 1e-6, 2).unwrap();
        let r: Result<(f64, u32)> = p.escalate("demo", |_| Err(Error::PrecisionExhausted("x".into())), |a: &f64, b: &f64| (a - b).abs());
        assert!(matches!(r, Err(Error::PrecisionExhausted(_))));
    }
}
