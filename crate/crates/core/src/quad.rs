use rug::Float;

/// Gauss–Legendre rule on [−1, 1].
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
}

/// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p0 = Float::with_val(prec, 1u32);
    let mut p1 = x.clone();
    for k in 1..n {
        // (k+1)P_{k+1} = (2k+1)xP_k − kP_{k−1}
        let next = (Float::with_val(prec, x * &p1) * (2 * k + 1) as u32 - Float::with_val(prec, &p0 * k as u32)) / (k + 1) as u32;
        p0 = std::mem::replace(&mut p1, next);
    }
    let denom = Float::with_val(prec, x.square_ref()) - 1u32;
    let d = (Float::with_val(prec, x * &p1) - &p0) * n as u32 / denom;
    (p1, d)
}

/// n-point rule with nodes in decreasing order, accurate to about `prec` bits.
pub fn gauss_legendre(n: usize, prec: u32) -> GaussLegendre {
    assert!(n >= 1);
    let wp = prec + 32;
    let eps = Float::with_val(wp, Float::i_exp(1, -(prec as i32) - 8));
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = Float::with_val(wp, guess);
        let mut d = Float::new(wp);
        for _ in 0..200 {
            let (p, dp) = legendre(n, &x);
            let dx = Float::with_val(wp, &p / &dp);
            x -= &dx;
            d = dp;
            if dx.abs() < eps {
                break;
            }
        }
        let (_, dp) = legendre(n, &x);
        if dp.is_finite() {
            d = dp;
        }
        let one_minus = Float::with_val(wp, 1u32 - Float::with_val(wp, x.square_ref()));
        let w = Float::with_val(wp, 2u32) / (one_minus * Float::with_val(wp, d.square_ref()));
        nodes.push(Float::with_val(prec, x));
        weights.push(Float::with_val(prec, w));
    }
    GaussLegendre { nodes, weights }
}

impl GaussLegendre {
    /// ∫_a^b f by the rule mapped to [a, b].
    pub fn integrate<F: FnMut(&Float) -> Float>(&self, a: &Float, b: &Float, mut f: F) -> Float {
        let prec = a.prec().max(b.prec());
        let half = Float::with_val(prec, b - a) / 2u32;
        let mid = Float::with_val(prec, a + b) / 2u32;
        let mut acc = Float::new(prec);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let s = Float::with_val(prec, &half * x) + &mid;
            acc += Float::with_val(prec, w * &f(&s));
        }
        acc * half
    }
}

/// Butcher tableau of the s-stage Gauss collocation method on [0, 1].
#[derive(Clone, Debug)]
pub struct Collocation {
    pub c: Vec<Float>,
    pub b: Vec<Float>,
    /// a[i][j] = ∫_0^{c_i} ℓ_j(τ) dτ for the Lagrange basis ℓ_j on the nodes c.
    pub a: Vec<Vec<Float>>,
}

pub fn collocation_tableau(s: usize, prec: u32) -> Collocation {
    let wp = prec + 64 + 4 * s as u32;
    let gl = gauss_legendre(s, wp);
    let c: Vec<Float> = gl.nodes.iter().rev().map(|x| Float::with_val(wp, x + 1u32) / 2u32).collect();
    let b: Vec<Float> = gl.weights.iter().rev().map(|w| Float::with_val(wp, w / 2u32)).collect();
    // Lagrange coefficients: inverse of the Vandermonde matrix V[m][k] = c_m^k
    let mut v: Vec<Vec<Float>> = c
        .iter()
        .map(|cm| {
            let mut row = Vec::with_capacity(2 * s);
            let mut p = Float::with_val(wp, 1u32);
            for _ in 0..s {
                row.push(p.clone());
                p *= cm;
            }
            row
        })
        .collect();
    let mut inv: Vec<Vec<Float>> = (0..s)
        .map(|i| (0..s).map(|j| Float::with_val(wp, (i == j) as u32)).collect())
        .collect();
    for col in 0..s {
        let piv = (col..s)
            .max_by(|&p, &q| v[p][col].clone().abs().partial_cmp(&v[q][col].clone().abs()).unwrap())
            .unwrap();
        v.swap(col, piv);
        inv.swap(col, piv);
        let d = v[col][col].clone();
        for k in 0..s {
            v[col][k] /= &d;
            inv[col][k] /= &d;
        }
        for r in 0..s {
            if r != col {
                let f = v[r][col].clone();
                for k in 0..s {
                    let t = Float::with_val(wp, &f * &v[col][k]);
                    v[r][k] -= t;
                    let t = Float::with_val(wp, &f * &inv[col][k]);
                    inv[r][k] -= t;
                }
            }
        }
    }
    // V·X = I with X = V^{-1}; ℓ_j(τ) = Σ_k X[k][j] τ^k
    let a = c
        .iter()
        .map(|ci| {
            (0..s)
                .map(|j| {
                    let mut acc = Float::new(wp);
                    let mut p = ci.clone();
                    for (k, row) in inv.iter().enumerate() {
                        acc += Float::with_val(wp, &row[j] * &p) / (k + 1) as u32;
                        p *= ci;
                    }
                    Float::with_val(prec, acc)
                })
                .collect()
        })
        .collect();
    Collocation {
        c: c.into_iter().map(|x| Float::with_val(prec, x)).collect(),
        b: b.into_iter().map(|x| Float::with_val(prec, x)).collect(),
        a,
    }
}
