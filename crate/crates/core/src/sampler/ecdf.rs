use crate::asymptotics::scaling;
use crate::error::{Error, Result};
use crate::painleve::{f1, PIISolution};
use serde::Serialize;
use std::io::Write;

/// Largest F1 mass allowed beyond the grid ends when samples fall outside it.
const OUTSIDE_MASS: f64 = 1e-6;

/// Empirical law of L_1 with the scaling (L_1 − ηN)/(ρN^{1/3}).
#[derive(Clone, Debug, Serialize)]
pub struct EmpiricalCdf {
    pub n: u32,
    pub t: f64,
    pub eta: f64,
    pub rho: f64,
    /// Samples in draw order.
    pub samples: Vec<u32>,
    sorted: Vec<u32>,
}

impl EmpiricalCdf {
    pub fn new(samples: Vec<u32>, n: u32, t: f64) -> Result<Self> {
        let s = scaling(t)?;
        let mut sorted = samples.clone();
        sorted.sort_unstable();
        Ok(Self { n, t, eta: s.eta, rho: s.rho, samples, sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn scaled(&self, l1: u32) -> f64 {
        let nf = self.n as f64;
        (l1 as f64 - self.eta * nf) / (self.rho * nf.cbrt())
    }

    /// F̂(x) = #{scaled ≤ x}/n.
    pub fn eval(&self, x: f64) -> f64 {
        let c = self.sorted.partition_point(|&l| self.scaled(l) <= x);
        c as f64 / self.len() as f64
    }

    /// P̂(L_1 ≤ l).
    pub fn cdf_at(&self, l: u32) -> f64 {
        self.sorted.partition_point(|&v| v <= l) as f64 / self.len() as f64
    }

    /// sup_x |F̂(x) − F1(x)|, attained at a jump of F̂ on one of its two sides.
    pub fn ks_distance(&self, sol: &PIISolution) -> Result<f64> {
        let (lo, hi) = sol.range();
        let f1_at = |x: f64| -> Result<f64> {
            if x < lo {
                let edge = f1(lo, sol)?;
                if edge > OUTSIDE_MASS {
                    return Err(Error::GridUnderspan(format!("sample at x = {x:.3} left of the F1 grid [{lo}, {hi}]")));
                }
                Ok(0.0)
            } else if x > hi {
                let edge = 1.0 - f1(hi, sol)?;
                if edge > OUTSIDE_MASS {
                    return Err(Error::GridUnderspan(format!("sample at x = {x:.3} right of the F1 grid [{lo}, {hi}]")));
                }
                Ok(1.0)
            } else {
                f1(x, sol)
            }
        };
        let n = self.len() as f64;
        let mut d = 0.0f64;
        let mut i = 0;
        while i < self.sorted.len() {
            let v = self.sorted[i];
            let mut j = i;
            while j < self.sorted.len() && self.sorted[j] == v {
                j += 1;
            }
            let f = f1_at(self.scaled(v))?;
            d = d.max((i as f64 / n - f).abs()).max((j as f64 / n - f).abs());
            i = j;
        }
        Ok(d)
    }

    /// CSV with columns sample_index, L1, scaled_value.
    pub fn write_samples_csv<W: Write>(&self, mut out: W, provenance: &str) -> Result<()> {
        writeln!(out, "# {provenance}")?;
        writeln!(out, "sample_index,L1,scaled_value")?;
        for (i, &l) in self.samples.iter().enumerate() {
            writeln!(out, "{i},{l},{:.16e}", self.scaled(l))?;
        }
        out.flush()?;
        Ok(())
    }
}
