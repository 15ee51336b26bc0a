use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 6;

/// Critic coefficients `Θ = (θ^{V,0}, θ^{V,1}, θ^{V,2}, θ^{g,0}, θ^{g,1}, θ^{g,2})`,
/// each block in `ℝ^d`, with `p(θ, τ) = Σ_j θ_j τ^{j+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticParams {
    pub degree: usize,
    pub theta: Vec<f64>,
}

impl CriticParams {
    pub fn zeros(degree: usize) -> Result<Self> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::Config(format!("critic degree must lie in 1..={MAX_DEGREE}, got {degree}")));
        }
        Ok(Self {
            degree,
            theta: vec![0.0; 6 * degree],
        })
    }

    pub fn from_vec(degree: usize, theta: Vec<f64>) -> Result<Self> {
        let mut c = Self::zeros(degree)?;
        if theta.len() != c.theta.len() {
            return Err(Error::Config(format!(
                "critic needs {} coefficients, got {}",
                c.theta.len(),
                theta.len()
            )));
        }
        c.theta = theta;
        Ok(c)
    }

    /// Least-squares fit of each block's polynomial to given coefficient
    /// functions of `t`: `v(t) = [c₀, c₁, c₂]` with
    /// `V ≈ x̂ + c₂y² + c₁y + c₀`, and likewise `g(t)` for `g`.
    pub fn fit(
        degree: usize,
        horizon: f64,
        v: impl Fn(f64) -> [f64; 3],
        g: impl Fn(f64) -> [f64; 3],
        samples: usize,
    ) -> Result<Self> {
        let mut out = Self::zeros(degree)?;
        let d = degree;
        let taus: Vec<f64> = (1..=samples).map(|k| horizon * k as f64 / samples as f64).collect();
        let mut gram = vec![vec![0.0; d]; d];
        for &tau in &taus {
            for a in 0..d {
                for b in 0..d {
                    gram[a][b] += tau.powi(a as i32 + 1) * tau.powi(b as i32 + 1);
                }
            }
        }
        for (offset, f) in [(0, &v as &dyn Fn(f64) -> [f64; 3]), (3 * d, &g)] {
            for m in 0..3 {
                let mut rhs = vec![0.0; d];
                for &tau in &taus {
                    let c = f(horizon - tau)[m];
                    for a in 0..d {
                        rhs[a] += tau.powi(a as i32 + 1) * c;
                    }
                }
                let sol = solve_dense(gram.clone(), rhs)?;
                out.theta[offset + m * d..offset + (m + 1) * d].copy_from_slice(&sol);
            }
        }
        Ok(out)
    }

    pub fn v_block(&self) -> &[f64] {
        &self.theta[..3 * self.degree]
    }

    pub fn g_block(&self) -> &[f64] {
        &self.theta[3 * self.degree..]
    }
}

fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col].abs() < 1e-300 {
            return Err(Error::Config("least-squares system is singular".into()));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Ok(x)
}

/// Features `yᵐτ^{j+1}`, `m = 0..3`, `j = 0..d`, in block order.
pub fn features(degree: usize, tau: f64, y: f64) -> Vec<f64> {
    let mut f = Vec::with_capacity(3 * degree);
    let mut ym = 1.0;
    for _ in 0..3 {
        let mut tp = tau;
        for _ in 0..degree {
            f.push(ym * tp);
            tp *= tau;
        }
        ym *= y;
    }
    f
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `(V, g)` at `(t, x̂, y)`.
pub fn critic_eval(theta: &CriticParams, t: f64, x_hat: f64, y: f64, horizon: f64) -> (f64, f64) {
    let f = features(theta.degree, horizon - t, y);
    (x_hat + dot(theta.v_block(), &f), x_hat + dot(theta.g_block(), &f))
}

/// One observed step `(t_k, x̂_k, y_k) → (t_{k+1}, x̂_{k+1}, y_{k+1})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub t0: f64,
    pub x0: f64,
    pub y0: f64,
    pub t1: f64,
    pub x1: f64,
    pub y1: f64,
}

/// `(C¹, C²)` of a transition, where `reg` is `λ_i(t_k)Φ_{h_i}(Π(t_k))`.
///
/// `C¹ = ΔV/Δt + γg_kΔg/Δt − (γ/2)Δ(g²)/Δt + reg`, `C² = Δg/Δt`.
pub fn td_errors(theta: &CriticParams, tr: &Transition, gamma: f64, reg: f64, horizon: f64) -> (f64, f64) {
    let dt = tr.t1 - tr.t0;
    let (v0, g0) = critic_eval(theta, tr.t0, tr.x0, tr.y0, horizon);
    let (v1, g1) = critic_eval(theta, tr.t1, tr.x1, tr.y1, horizon);
    let dg = g1 - g0;
    let c1 = (v1 - v0) / dt + gamma * g0 * dg / dt - 0.5 * gamma * (g1 * g1 - g0 * g0) / dt + reg;
    (c1, dg / dt)
}

/// `Σ(C¹)² + Σ(C²)²` over `transitions` and its gradient in `Θ`.
pub fn critic_loss_and_grad(
    theta: &CriticParams,
    transitions: &[Transition],
    regs: &[f64],
    gamma: f64,
    horizon: f64,
) -> (f64, Vec<f64>) {
    let d = theta.degree;
    let n = 3 * d;
    let mut grad = vec![0.0; 6 * d];
    let mut loss = 0.0;
    for (tr, &reg) in transitions.iter().zip(regs) {
        let dt = tr.t1 - tr.t0;
        let f0 = features(d, horizon - tr.t0, tr.y0);
        let f1 = features(d, horizon - tr.t1, tr.y1);
        let df: Vec<f64> = f1.iter().zip(&f0).map(|(a, b)| (a - b) / dt).collect();
        let dv = tr.x1 - tr.x0 + dt * dot(theta.v_block(), &df);
        let dg = tr.x1 - tr.x0 + dt * dot(theta.g_block(), &df);
        let c1 = dv / dt - 0.5 * gamma * dg * dg / dt + reg;
        let c2 = dg / dt;
        loss += c1 * c1 + c2 * c2;
        for q in 0..n {
            grad[q] += 2.0 * c1 * df[q];
            grad[n + q] += 2.0 * c1 * (-gamma * dg * df[q]) + 2.0 * c2 * df[q];
        }
    }
    (loss, grad)
}

/// One gradient-descent step `Θ ← Θ − α∇Θ`.
pub fn critic_update(
    theta: &CriticParams,
    transitions: &[Transition],
    regs: &[f64],
    gamma: f64,
    horizon: f64,
    alpha: f64,
) -> (CriticParams, f64) {
    let (loss, grad) = critic_loss_and_grad(theta, transitions, regs, gamma, horizon);
    let mut next = theta.clone();
    for (t, g) in next.theta.iter_mut().zip(&grad) {
        *t -= alpha * g;
    }
    (next, loss)
}
