//! Integrators for the Painlevé II system with its running integrals.
//!
//! State (u, u', v, w, q) with u'' = 2u³ + xu, v' = −u², w' = −u, q' = −v, so that
//! v = ∫_x^∞ u², w = ∫_x^∞ u and q = ∫_x^∞ v once the values at the matching point are set.

use crate::error::{Error, Result};
use crate::quad::{collocation_tableau, Collocation};
use rug::Float;

pub type State = [Float; 5];

/// |u| beyond this is treated as a blow-up; the true solution stays below √(|x|/2) + 1 on the grid.
const BLOW_UP: f64 = 1e6;

pub(crate) fn rhs(x: &Float, y: &State) -> State {
    let prec = y[0].prec();
    let u2 = Float::with_val(prec, y[0].square_ref());
    let upp = Float::with_val(prec, &u2 * &y[0]) * 2u32 + Float::with_val(prec, x * &y[0]);
    [y[1].clone(), upp, -u2, -y[0].clone(), -y[2].clone()]
}

fn check_finite(x: &Float, y: &State) -> Result<()> {
    let u = y[0].to_f64();
    if !u.is_finite() || u.abs() > BLOW_UP || y.iter().any(|c| !c.is_finite()) {
        return Err(Error::BlowUp(x.to_f64()));
    }
    Ok(())
}

/// Scaled distance max_i |a_i − b_i| / (1 + |b_i|).
pub(crate) fn state_gap(a: &State, b: &State) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| {
            let d = Float::with_val(p.prec(), p - q).abs().to_f64();
            d / (1.0 + q.to_f64().abs())
        })
        .fold(0.0, f64::max)
}

pub trait Stepper: Sync {
    fn name(&self) -> &'static str;
    /// Integrate from (x, y) to `target` (either direction).
    fn advance(&self, x: &Float, y: &State, target: &Float) -> Result<State>;
}

/// Explicit Taylor series method of fixed order with step-size control.
pub struct TaylorStepper {
    pub order: usize,
    pub tol: f64,
    pub prec: u32,
}

impl TaylorStepper {
    /// Taylor coefficients of the five components about x0, degrees 0..=order.
    pub fn coefficients(&self, x0: &Float, y: &State) -> [Vec<Float>; 5] {
        let k_max = self.order;
        let p = self.prec;
        let zero = || Float::new(p);
        let mut u: Vec<Float> = vec![zero(); k_max + 1];
        let mut v: Vec<Float> = vec![zero(); k_max + 1];
        let mut w: Vec<Float> = vec![zero(); k_max + 1];
        let mut q: Vec<Float> = vec![zero(); k_max + 1];
        let mut sq: Vec<Float> = Vec::with_capacity(k_max + 1);
        u[0] = y[0].clone();
        u[1] = y[1].clone();
        v[0] = y[2].clone();
        w[0] = y[3].clone();
        q[0] = y[4].clone();
        for k in 0..k_max {
            // (u²)_k, (u³)_k need u_0..u_k, which are known at this point
            let mut s = zero();
            for i in 0..=k {
                s += Float::with_val(p, &u[i] * &u[k - i]);
            }
            sq.push(s);
            let mut cube = zero();
            for i in 0..=k {
                cube += Float::with_val(p, &sq[i] * &u[k - i]);
            }
            if k + 2 <= k_max {
                let mut num = cube * 2u32 + Float::with_val(p, x0 * &u[k]);
                if k >= 1 {
                    num += &u[k - 1];
                }
                u[k + 2] = num / ((k + 1) * (k + 2)) as u32;
            }
            v[k + 1] = -Float::with_val(p, &sq[k] / (k + 1) as u32);
            w[k + 1] = -Float::with_val(p, &u[k] / (k + 1) as u32);
            q[k + 1] = -Float::with_val(p, &v[k] / (k + 1) as u32);
        }
        let up: Vec<Float> = (0..=k_max)
            .map(|k| if k < k_max { Float::with_val(p, &u[k + 1] * (k + 1) as u32) } else { zero() })
            .collect();
        [u, up, v, w, q]
    }

    /// Largest |h| for which the two highest-order terms stay below the tolerance.
    fn step_size(&self, c: &[Vec<Float>; 5]) -> f64 {
        let k = self.order;
        let mut h = f64::INFINITY;
        for j in [k - 1, k] {
            let m = c.iter().map(|s| s[j].to_f64().abs()).fold(0.0, f64::max);
            if m > 0.0 {
                h = h.min((self.tol / m).powf(1.0 / j as f64));
            }
        }
        0.7 * h.min(1.0)
    }

    fn eval(c: &[Vec<Float>; 5], h: &Float) -> State {
        c.clone().map(|s| {
            let mut acc = Float::new(h.prec());
            for coef in s.iter().rev() {
                acc *= h;
                acc += coef;
            }
            acc
        })
    }
}

impl Stepper for TaylorStepper {
    fn name(&self) -> &'static str {
        "taylor"
    }

    fn advance(&self, x: &Float, y: &State, target: &Float) -> Result<State> {
        let p = self.prec;
        let mut x = Float::with_val(p, x);
        let mut y = y.clone();
        let dir = if target < &x { -1.0 } else { 1.0 };
        while x != *target {
            let c = self.coefficients(&x, &y);
            let hmax = self.step_size(&c);
            let remaining = Float::with_val(p, target - &x);
            let h = if remaining.to_f64().abs() <= hmax { remaining } else { Float::with_val(p, dir * hmax) };
            y = Self::eval(&c, &h);
            x += &h;
            if (dir < 0.0 && x < *target) || (dir > 0.0 && x > *target) {
                x = Float::with_val(p, target);
            }
            check_finite(&x, &y)?;
        }
        Ok(y)
    }
}

/// s-stage Gauss collocation solved by fixed-point iteration, with step doubling for error control.
pub struct CollocationStepper {
    pub tableau: Collocation,
    pub tol: f64,
    pub prec: u32,
    pub max_step: f64,
}

impl CollocationStepper {
    pub fn new(stages: usize, tol: f64, prec: u32, max_step: f64) -> Self {
        Self { tableau: collocation_tableau(stages, prec), tol, prec, max_step }
    }

    fn stages(&self) -> usize {
        self.tableau.c.len()
    }

    /// One collocation step, or None if the fixed-point iteration does not settle.
    fn step(&self, x: &Float, y: &State, h: &Float) -> Option<State> {
        let p = self.prec;
        let s = self.stages();
        let t = &self.tableau;
        let f0 = rhs(x, y);
        let mut k: Vec<State> = vec![f0; s];
        let xs: Vec<Float> = t.c.iter().map(|c| Float::with_val(p, c * h) + x).collect();
        let stop = self.tol * 1e-3;
        for _ in 0..80 {
            let mut delta = 0.0f64;
            let mut next = Vec::with_capacity(s);
            for i in 0..s {
                let mut yi = y.clone();
                for (j, kj) in k.iter().enumerate() {
                    let ahj = Float::with_val(p, &t.a[i][j] * h);
                    for (c, kc) in yi.iter_mut().zip(kj) {
                        *c += Float::with_val(p, &ahj * kc);
                    }
                }
                let fi = rhs(&xs[i], &yi);
                let hd = h.to_f64().abs();
                delta = delta.max(hd * state_gap(&fi, &k[i]));
                next.push(fi);
            }
            k = next;
            if delta < stop {
                let mut out = y.clone();
                for (bj, kj) in t.b.iter().zip(&k) {
                    let bh = Float::with_val(p, bj * h);
                    for (c, kc) in out.iter_mut().zip(kj) {
                        *c += Float::with_val(p, &bh * kc);
                    }
                }
                return Some(out);
            }
        }
        None
    }
}

impl Stepper for CollocationStepper {
    fn name(&self) -> &'static str {
        "collocation"
    }

    fn advance(&self, x: &Float, y: &State, target: &Float) -> Result<State> {
        let p = self.prec;
        let order = 2.0 * self.stages() as f64;
        let mut x = Float::with_val(p, x);
        let mut y = y.clone();
        let dir = if target < &x { -1.0 } else { 1.0 };
        let mut hmag = self.max_step;
        let mut rejections = 0;
        while x != *target {
            let remaining = Float::with_val(p, target - &x);
            let last = remaining.to_f64().abs() <= hmag;
            let h = if last { remaining } else { Float::with_val(p, dir * hmag) };
            let half = Float::with_val(p, &h / 2u32);
            let xm = Float::with_val(p, &x + &half);
            let attempt = self
                .step(&x, &y, &h)
                .and_then(|full| self.step(&x, &y, &half).and_then(|a| self.step(&xm, &a, &half)).map(|b| (full, b)));
            let Some((full, fine)) = attempt else {
                hmag = h.to_f64().abs() / 2.0;
                rejections += 1;
                if rejections > 60 {
                    return Err(Error::PrecisionExhausted(format!("collocation iteration stalls at x = {}", x.to_f64())));
                }
                continue;
            };
            let err = state_gap(&full, &fine);
            let factor = if err > 0.0 { 0.9 * (self.tol / err).powf(1.0 / (order + 1.0)) } else { 2.0 };
            if err <= self.tol {
                y = fine;
                x = if last { Float::with_val(p, target) } else { x + &h };
                check_finite(&x, &y)?;
                hmag = (h.to_f64().abs() * factor.min(2.0)).min(self.max_step);
                rejections = 0;
            } else {
                hmag = h.to_f64().abs() * factor.max(0.2);
                rejections += 1;
                if rejections > 60 {
                    return Err(Error::PrecisionExhausted(format!("collocation step control fails at x = {}", x.to_f64())));
                }
            }
        }
        Ok(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(vals: [f64; 5], p: u32) -> State {
        vals.map(|v| Float::with_val(p, v))
    }

    #[test]
    fn taylor_coefficients_solve_the_system() {
        // differentiating the truncated series reproduces the right-hand side at the centre
        let t = TaylorStepper { order: 20, tol: 1e-30, prec: 128 };
        let x0 = Float::with_val(128, 0.3);
        let y = state([-0.4, 0.2, 0.7, -0.5, 1.1], 128);
        let c = t.coefficients(&x0, &y);
        let f = rhs(&x0, &y);
        for i in 0..5 {
            if i == 1 {
                continue;
            }
            assert!(Float::with_val(128, &c[i][1] - &f[i]).abs() < 1e-35);
        }
        let upp = Float::with_val(128, &c[0][2] * 2u32);
        assert!(Float::with_val(128, upp - &f[1]).abs() < 1e-35);
    }

    #[test]
    fn integrators_agree_on_a_short_arc() {
        let p = 192;
        let y0 = state([-0.01, 0.005, 0.01, -0.2, 0.03], p);
        let (x0, x1) = (Float::with_val(p, 2.0), Float::with_val(p, -1.5));
        let a = TaylorStepper { order: 30, tol: 1e-40, prec: p }.advance(&x0, &y0, &x1).unwrap();
        let b = CollocationStepper::new(8, 1e-36, p, 0.25).advance(&x0, &y0, &x1).unwrap();
        assert!(state_gap(&a, &b) < 1e-30, "{}", state_gap(&a, &b));
        // and the journey back returns to the start
        let back = TaylorStepper { order: 30, tol: 1e-40, prec: p }.advance(&x1, &a, &x0).unwrap();
        assert!(state_gap(&back, &y0) < 1e-30);
    }

    #[test]
    fn blow_up_is_reported() {
        // data well above the separatrix leaves along a pole
        let y0 = state([-3.0, 5.0, 0.0, 0.0, 0.0], 128);
        let r = TaylorStepper { order: 24, tol: 1e-25, prec: 128 }.advance(&Float::with_val(128, 1.0), &y0, &Float::with_val(128, -8.0));
        assert!(matches!(r, Err(Error::BlowUp(_))));
    }
}
