use super::airy::airy_mp;
use super::ode::{rhs, CollocationStepper, State, Stepper, TaylorStepper};
use crate::error::{Error, Result};
use crate::precision::PrecisionPolicy;
use rayon::prelude::*;
use rug::Float;
use serde::Serialize;
use std::io::Write;

pub const DEFAULT_X_LEFT: f64 = -10.0;
/// Matching point. The correction to −Ai there is O(Ai³) ≈ 1e−39; leftward the separatrix
/// amplifies initial-data errors by roughly exp((2√2/3)|x|^{3/2}) ≈ 1e13 at x = −10.
pub const DEFAULT_X_RIGHT: f64 = 12.0;

#[derive(Clone, Debug)]
pub struct PiiOptions {
    /// Node spacing of the output grid.
    pub spacing: f64,
    pub taylor_order: usize,
    pub stages: usize,
    /// Local error tolerance of both integrators.
    pub local_tol: f64,
    /// Maximum allowed gap between the two integrators at any node.
    pub agree_tol: f64,
    /// Offset of the finite-difference probes around each node.
    pub probe: f64,
}

impl Default for PiiOptions {
    fn default() -> Self {
        Self { spacing: 1.0 / 32.0, taylor_order: 36, stages: 10, local_tol: 1e-32, agree_tol: 1e-8, probe: 1e-6 }
    }
}

/// Hastings–McLeod solution tabulated on a descending grid.
#[derive(Clone, Debug, Serialize)]
pub struct PIISolution {
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    pub u_prime: Vec<f64>,
    /// ∫_x^∞ u²
    pub v: Vec<f64>,
    /// ∫_x^∞ u
    pub w_int: Vec<f64>,
    /// ∫_x^∞ v = ∫_x^∞ (s − x) u(s)² ds
    pub q_int: Vec<f64>,
    /// |u'' − 2u³ − xu| from second differences of probe solutions, per integrator.
    pub residual_taylor: Vec<f64>,
    pub residual_collocation: Vec<f64>,
    /// Central difference of F1 from the probe solutions.
    pub f1_prime_fd: Vec<f64>,
    /// Largest node-wise gap between the two integrators over (u, u', v, w, q).
    pub agreement: f64,
    pub x_match: f64,
}

/// Value of the solution and its integrals at an arbitrary point of the grid.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PiiPoint {
    pub x: f64,
    pub u: f64,
    pub u_prime: f64,
    pub v: f64,
    pub w_int: f64,
    pub q_int: f64,
}

/// Matched data at x: u = −Ai − Ai³/(4x), v = Ai'² − x Ai², w = −∫_x^∞ Ai,
/// q = (2/3)x²Ai² − (2/3)x Ai'² − (1/3)Ai Ai'. Neglected terms are O(Ai⁴).
pub fn matching_data(x: f64, prec: u32) -> Result<State> {
    let xf = Float::with_val(prec, x);
    let a = airy_mp(&xf, prec)?;
    let (ai, aip) = (&a.ai, &a.ai_prime);
    let ai2 = Float::with_val(prec, ai.square_ref());
    let aip2 = Float::with_val(prec, aip.square_ref());
    let ai3 = Float::with_val(prec, &ai2 * ai);
    let four_x = Float::with_val(prec, &xf * 4u32);
    let u = -Float::with_val(prec, ai + Float::with_val(prec, &ai3 / &four_x));
    // d/dx [Ai³/(4x)] = 3Ai²Ai'/(4x) − Ai³/(4x²)
    let corr = Float::with_val(prec, Float::with_val(prec, &ai2 * aip) * 3u32 / &four_x) - Float::with_val(prec, &ai3 / &four_x) / &xf;
    let up = -Float::with_val(prec, aip + corr);
    let v = Float::with_val(prec, &aip2 - Float::with_val(prec, &xf * &ai2));
    let w = -a.tail_int.clone();
    let x2 = Float::with_val(prec, xf.square_ref());
    let q = Float::with_val(prec, &x2 * &ai2) * 2u32 / 3u32 - Float::with_val(prec, &xf * &aip2) * 2u32 / 3u32 - Float::with_val(prec, ai * aip) / 3u32;
    Ok([u, up, v, w, q])
}

fn make_grid(x_left: f64, x_right: f64, spacing: f64) -> Vec<f64> {
    let n = ((x_right - x_left) / spacing - 1e-9).ceil() as usize;
    let mut g: Vec<f64> = (0..n).map(|i| x_right - i as f64 * spacing).collect();
    g.push(x_left);
    g
}

struct Run {
    states: Vec<State>,
    residual: Vec<f64>,
    f1_fd: Vec<f64>,
}

fn log_f1(y: &State) -> Float {
    Float::with_val(y[3].prec(), &y[3] - &y[4]) / 2u32
}

fn run(stepper: &dyn Stepper, grid: &[f64], y0: &State, prec: u32, probe: f64) -> Result<Run> {
    let mut states = Vec::with_capacity(grid.len());
    let mut y = y0.clone();
    let mut x = Float::with_val(prec, grid[0]);
    for &node in grid {
        let target = Float::with_val(prec, node);
        if target != x {
            y = stepper.advance(&x, &y, &target)?;
            x = target;
        }
        states.push(y.clone());
    }
    let probes: Vec<(f64, f64)> = grid
        .par_iter()
        .zip(&states)
        .map(|(&node, y)| -> Result<(f64, f64)> {
            let x = Float::with_val(prec, node);
            let d = Float::with_val(prec, probe);
            let yp = stepper.advance(&x, y, &Float::with_val(prec, &x + &d))?;
            let ym = stepper.advance(&x, y, &Float::with_val(prec, &x - &d))?;
            let d2 = Float::with_val(prec, d.square_ref());
            let second = (Float::with_val(prec, &yp[0] + &ym[0]) - Float::with_val(prec, &y[0] * 2u32)) / &d2;
            let res = (second - &rhs(&x, y)[1]).abs().to_f64();
            let fp = log_f1(&yp).exp();
            let fm = log_f1(&ym).exp();
            let fd = (fp - fm) / (d * 2u32);
            Ok((res, fd.to_f64()))
        })
        .collect::<Result<_>>()?;
    let (residual, f1_fd) = probes.into_iter().unzip();
    Ok(Run { states, residual, f1_fd })
}

/// Integrate the Hastings–McLeod solution leftward from the matching point `x_right`
/// down to `x_left`, with the default options.
pub fn hastings_mcleod(x_left: f64, x_right: f64, policy: &PrecisionPolicy) -> Result<PIISolution> {
    hastings_mcleod_with(x_left, x_right, policy, &PiiOptions::default())
}

pub fn hastings_mcleod_with(x_left: f64, x_right: f64, policy: &PrecisionPolicy, opts: &PiiOptions) -> Result<PIISolution> {
    policy.validate()?;
    if !(x_right >= 6.0) || !(x_left < x_right) || !(opts.spacing > 0.0) {
        return Err(Error::Domain(format!("need x_right ≥ 6 and x_left < x_right; got [{x_left}, {x_right}]")));
    }
    let prec = policy.bits;
    let grid = make_grid(x_left, x_right, opts.spacing);
    let y0 = matching_data(x_right, prec)?;
    let taylor = TaylorStepper { order: opts.taylor_order, tol: opts.local_tol, prec };
    let colloc = CollocationStepper::new(opts.stages, opts.local_tol, prec, opts.spacing);
    let (a, b) = rayon::join(|| run(&taylor, &grid, &y0, prec, opts.probe), || run(&colloc, &grid, &y0, prec, opts.probe));
    let (a, b) = (a?, b?);
    let mut agreement = 0.0f64;
    for (sa, sb) in a.states.iter().zip(&b.states) {
        for (p, q) in sa.iter().zip(sb) {
            agreement = agreement.max(Float::with_val(prec, p - q).abs().to_f64());
        }
    }
    if agreement > opts.agree_tol {
        return Err(Error::Disagreement { what: "Painlevé II integrators".into(), gap: agreement, tol: opts.agree_tol });
    }
    let col = |i: usize| a.states.iter().map(|s| s[i].to_f64()).collect::<Vec<_>>();
    Ok(PIISolution {
        u: col(0),
        u_prime: col(1),
        v: col(2),
        w_int: col(3),
        q_int: col(4),
        grid,
        residual_taylor: a.residual,
        residual_collocation: b.residual,
        f1_prime_fd: a.f1_fd,
        agreement,
        x_match: x_right,
    })
}

fn hermite(x0: f64, x1: f64, f0: f64, f1: f64, d0: f64, d1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let s = (x - x0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * f0 + (s3 - 2.0 * s2 + s) * h * d0 + (-2.0 * s3 + 3.0 * s2) * f1 + (s3 - s2) * h * d1
}

impl PIISolution {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// (leftmost, rightmost) grid point.
    pub fn range(&self) -> (f64, f64) {
        (*self.grid.last().unwrap(), self.grid[0])
    }

    /// Index i with grid[i] ≥ x ≥ grid[i+1].
    fn interval(&self, x: f64) -> Result<usize> {
        let (lo, hi) = self.range();
        if !(x >= lo && x <= hi) {
            return Err(Error::OutOfGrid(x));
        }
        let i = self.grid.partition_point(|&g| g > x);
        Ok(i.saturating_sub(1).min(self.grid.len() - 2))
    }

    pub fn max_residual(&self) -> f64 {
        self.residual_taylor.iter().chain(&self.residual_collocation).copied().fold(0.0, f64::max)
    }

    pub fn log_f1_node(&self, i: usize) -> f64 {
        0.5 * (self.w_int[i] - self.q_int[i])
    }

    /// (log F1)' = ½(v − u) at node i.
    pub fn log_f1_slope(&self, i: usize) -> f64 {
        0.5 * (self.v[i] - self.u[i])
    }

    /// Cubic Hermite interpolation of every component, with derivatives from the system.
    pub fn eval(&self, x: f64) -> Result<PiiPoint> {
        let i = self.interval(x)?;
        let (x0, x1) = (self.grid[i], self.grid[i + 1]);
        let upp = |j: usize| 2.0 * self.u[j].powi(3) + self.grid[j] * self.u[j];
        let h = |f: &[f64], d0: f64, d1: f64| hermite(x0, x1, f[i], f[i + 1], d0, d1, x);
        Ok(PiiPoint {
            x,
            u: h(&self.u, self.u_prime[i], self.u_prime[i + 1]),
            u_prime: h(&self.u_prime, upp(i), upp(i + 1)),
            v: h(&self.v, -self.u[i].powi(2), -self.u[i + 1].powi(2)),
            w_int: h(&self.w_int, -self.u[i], -self.u[i + 1]),
            q_int: h(&self.q_int, -self.v[i], -self.v[i + 1]),
        })
    }
}

/// F1(x) by monotone cubic Hermite interpolation of log F1 between nodes.
pub fn f1(x: f64, sol: &PIISolution) -> Result<f64> {
    Ok(log_f1_interp(x, sol)?.exp())
}

/// log F1 between nodes. Slopes are the exact ½(v − u), limited per interval
/// (Fritsch–Carlson) so the interpolant cannot overshoot.
pub fn log_f1_interp(x: f64, sol: &PIISolution) -> Result<f64> {
    let i = sol.interval(x)?;
    let (x0, x1) = (sol.grid[i], sol.grid[i + 1]);
    let (g0, g1) = (sol.log_f1_node(i), sol.log_f1_node(i + 1));
    let (mut d0, mut d1) = (sol.log_f1_slope(i), sol.log_f1_slope(i + 1));
    let delta = (g1 - g0) / (x1 - x0);
    if delta <= 0.0 {
        d0 = 0.0;
        d1 = 0.0;
    } else {
        let (a, b) = (d0 / delta, d1 / delta);
        let r = a * a + b * b;
        if r > 9.0 {
            let tau = 3.0 / r.sqrt();
            d0 = tau * a * delta;
            d1 = tau * b * delta;
        }
    }
    Ok(hermite(x0, x1, g0, g1, d0, d1, x))
}

/// F1'(x) from the closed form ½(∫_x^∞u² − u)·F1. In the paper's notation this is
/// −½(u + v)F1 with v = −∫_x^∞ u².
pub fn f1_prime(x: f64, sol: &PIISolution) -> Result<f64> {
    let p = sol.eval(x)?;
    Ok(0.5 * (p.v - p.u) * f1(x, sol)?)
}

/// 1 − F1(x), accurate when F1 is close to one.
pub fn f1_complement(x: f64, sol: &PIISolution) -> Result<f64> {
    Ok(-log_f1_interp(x, sol)?.exp_m1())
}

#[derive(Clone, Debug, Serialize)]
pub struct F1Table {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    /// ∫_x^∞ u²
    pub v: Vec<f64>,
    pub f1: Vec<f64>,
    pub f1_prime: Vec<f64>,
}

impl F1Table {
    /// Table at the solution's nodes.
    pub fn from_solution(sol: &PIISolution) -> Self {
        let f1: Vec<f64> = (0..sol.len()).map(|i| sol.log_f1_node(i).exp()).collect();
        Self {
            x: sol.grid.clone(),
            u: sol.u.clone(),
            v: sol.v.clone(),
            f1_prime: (0..sol.len()).map(|i| sol.log_f1_slope(i) * f1[i]).collect(),
            f1,
        }
    }

    /// Table on a user grid, by interpolation.
    pub fn on_grid(sol: &PIISolution, xs: &[f64]) -> Result<Self> {
        let mut t = Self { x: Vec::new(), u: Vec::new(), v: Vec::new(), f1: Vec::new(), f1_prime: Vec::new() };
        for &x in xs {
            let p = sol.eval(x)?;
            let f = f1(x, sol)?;
            t.x.push(x);
            t.u.push(p.u);
            t.v.push(p.v);
            t.f1.push(f);
            t.f1_prime.push(0.5 * (p.v - p.u) * f);
        }
        Ok(t)
    }

    pub fn write_csv<W: Write>(&self, out: W, provenance: &str) -> Result<()> {
        let rows: Vec<Vec<f64>> = (0..self.x.len()).map(|i| vec![self.x[i], self.u[i], self.v[i], self.f1[i], self.f1_prime[i]]).collect();
        crate::io::write_csv(out, provenance, &["x", "u", "v", "F1", "F1_prime"], &rows)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct F1Stats {
    pub mean: f64,
    pub variance: f64,
    /// ∫ dF1 over the grid plus the tail masses.
    pub mass: f64,
    /// F1 at the left end plus 1 − F1 at the right end.
    pub tail_mass: f64,
}

/// Largest tail mass outside the grid for which moments are reported.
pub const MAX_TAIL_MASS: f64 = 1e-8;

/// Mean and variance of dF1 by endpoint-corrected trapezoid sums on the nodes,
/// with each tail's mass placed at the grid end.
pub fn f1_stats(sol: &PIISolution) -> Result<F1Stats> {
    let n = sol.len();
    let (x_l, x_r) = sol.range();
    let left = sol.log_f1_node(n - 1).exp();
    let right = -sol.log_f1_node(0).exp_m1();
    let tail_mass = left + right;
    if tail_mass > MAX_TAIL_MASS {
        return Err(Error::GridUnderspan(format!("tail mass {tail_mass:.3e} outside [{x_l}, {x_r}]")));
    }
    // density p = F1·g', p' = F1·(g'² + g'') with g = log F1
    let dens: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let f = sol.log_f1_node(i).exp();
            let g1 = sol.log_f1_slope(i);
            let g2 = 0.5 * (-sol.u[i].powi(2) - sol.u_prime[i]);
            (f * g1, f * (g1 * g1 + g2))
        })
        .collect();
    let mut m = [0.0f64; 3];
    for i in 0..n - 1 {
        let (xa, xb) = (sol.grid[i + 1], sol.grid[i]);
        let h = xb - xa;
        for (k, acc) in m.iter_mut().enumerate() {
            let val = |j: usize| {
                let x = sol.grid[j];
                let (p, dp) = dens[j];
                let xk = x.powi(k as i32);
                let dxk = if k == 0 { 0.0 } else { k as f64 * x.powi(k as i32 - 1) };
                (xk * p, dxk * p + xk * dp)
            };
            let (fa, da) = val(i + 1);
            let (fb, db) = val(i);
            *acc += 0.5 * h * (fa + fb) + h * h / 12.0 * (da - db);
        }
    }
    m[0] += tail_mass;
    m[1] += x_l * left + x_r * right;
    m[2] += x_l * x_l * left + x_r * x_r * right;
    let mean = m[1] / m[0];
    Ok(F1Stats { mean, variance: m[2] / m[0] - mean * mean, mass: m[0], tail_mass })
}
