//! Independent oracles shared by the integration tests and the acceptance
//! binary. Nothing here calls the solver routines it is used to check.
#![allow(dead_code)]

use choquet_nash::equilibrium::{equilibrium_means, equilibrium_std, CoefficientSet};
use choquet_nash::{AgentParams, Distortion, LambdaSchedule, MarketParams};
use rand::Rng;

pub const TABLE1_HORIZON: f64 = 20.0;

pub fn table1_agents() -> [AgentParams; 2] {
    [
        AgentParams {
            gamma: 2.0,
            k: 0.1,
            lambda: LambdaSchedule::Exponential { lambda0: 0.01 },
            distortion: Distortion::normal(),
        },
        AgentParams {
            gamma: 1.0,
            k: 0.05,
            lambda: LambdaSchedule::Exponential { lambda0: 0.01 },
            distortion: Distortion::gini(),
        },
    ]
}

/// Preferences of the desk-scale learning experiment.
pub fn table2_agents() -> [AgentParams; 2] {
    [
        AgentParams {
            gamma: 2.0,
            k: 0.1,
            lambda: LambdaSchedule::Constant { value: 0.015 },
            distortion: Distortion::normal(),
        },
        AgentParams {
            gamma: 3.0,
            k: 0.05,
            lambda: LambdaSchedule::Constant { value: 0.02 },
            distortion: Distortion::gini(),
        },
    ]
}

/// Samples of `(t, a₁, a₂)` from a plain RK4 integration of
/// `a₂′ = 2(ι+ρv)a₂ − 2/γ`, `a₁′ = (ι+ρv)a₁ − ιȲa₂` backward from zero.
pub fn rk4_a_oracle(gamma: f64, m: &MarketParams, horizon: f64, steps: usize) -> Vec<(f64, f64, f64)> {
    let kappa = m.iota + m.rho * m.v;
    let f = |s: [f64; 2]| -> [f64; 2] {
        let [a1, a2] = s;
        [kappa * a1 - m.iota * m.y_bar * a2, 2.0 * kappa * a2 - 2.0 / gamma]
    };
    let h = -horizon / steps as f64;
    let mut s = [0.0, 0.0];
    let mut out = vec![(horizon, 0.0, 0.0)];
    for n in 0..steps {
        let k1 = f(s);
        let k2 = f([s[0] + 0.5 * h * k1[0], s[1] + 0.5 * h * k1[1]]);
        let k3 = f([s[0] + 0.5 * h * k2[0], s[1] + 0.5 * h * k2[1]]);
        let k4 = f([s[0] + h * k3[0], s[1] + h * k3[1]]);
        for q in 0..2 {
            s[q] += h / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
        }
        let t = horizon + h * (n + 1) as f64;
        out.push((t, s[0], s[1]));
    }
    out
}

/// Quadratic `c₀ + c₁y + ½c₂y²` with coefficients read from a grid function
/// triple, with time derivative by central differences.
struct Quadratic<'a> {
    c0: &'a choquet_nash::grid::GridFn,
    c1: &'a choquet_nash::grid::GridFn,
    c2: &'a choquet_nash::grid::GridFn,
}

impl Quadratic<'_> {
    fn value(&self, t: f64, y: f64) -> f64 {
        self.c0.eval(t) + self.c1.eval(t) * y + 0.5 * self.c2.eval(t) * y * y
    }
    fn dt(&self, t: f64, y: f64, horizon: f64) -> f64 {
        let h = 1e-4;
        let (lo, hi) = ((t - h).max(0.0), (t + h).min(horizon));
        (self.value(hi, y) - self.value(lo, y)) / (hi - lo)
    }
    fn dy(&self, t: f64, y: f64) -> f64 {
        self.c1.eval(t) + self.c2.eval(t) * y
    }
    fn dyy(&self, t: f64) -> f64 {
        self.c2.eval(t)
    }
}

/// Residuals of the extended HJB system of agent `i` at `(t, x̂, y)`:
/// `[W equation, g equation, first-order condition in μ_i, first-order
/// condition in σ_i]`.
pub fn hjb_residuals(
    i: usize,
    t: f64,
    x_hat: f64,
    y: f64,
    agents: &[AgentParams; 2],
    market: &MarketParams,
    coeffs: &[CoefficientSet; 2],
) -> [f64; 4] {
    let j = 1 - i;
    let horizon = coeffs[i].horizon();
    let c = &coeffs[i];
    let vq = Quadratic {
        c0: &c.b0,
        c1: &c.b1,
        c2: &c.b2,
    };
    let gq = Quadratic {
        c0: &c.a0,
        c1: &c.a1,
        c2: &c.a2,
    };
    let MarketParams {
        sigma, iota, y_bar, v, rho, ..
    } = *market;
    let gamma = agents[i].gamma;
    let k = agents[i].k;
    let means = equilibrium_means(t, y, agents, market, coeffs).expect("means");
    let m_hat = means[i] - k * means[j];
    let s_i = equilibrium_std(&agents[i], sigma, t, horizon);
    let s_j = equilibrium_std(&agents[j], sigma, t, horizon);
    let lambda = agents[i].lambda.at(t, horizon);
    let phi = s_i * agents[i].distortion.l2_norm();
    let quad = m_hat * m_hat + s_i * s_i + k * k * s_j * s_j;

    // generator of the exploratory wealth-gap/state diffusion applied to a
    // function with partials (φ_t, φ_x, φ_y, φ_xx, φ_yy, φ_xy)
    let gen = |pt: f64, px: f64, py: f64, pxx: f64, pyy: f64, pxy: f64| {
        pt + sigma * y * m_hat * px
            + iota * (y_bar - y) * py
            + 0.5 * sigma * sigma * quad * pxx
            + 0.5 * v * v * pyy
            + rho * v * sigma * m_hat * pxy
    };
    let g = x_hat + gq.value(t, y);
    let (g_t, g_y, g_yy) = (gq.dt(t, y, horizon), gq.dy(t, y), gq.dyy(t));
    let (v_t, v_y, v_yy) = (vq.dt(t, y, horizon), vq.dy(t, y), vq.dyy(t));

    let lv = gen(v_t, 1.0, v_y, 0.0, v_yy, 0.0);
    let lg = gen(g_t, 1.0, g_y, 0.0, g_yy, 0.0);
    let lg2 = gen(
        2.0 * g * g_t,
        2.0 * g,
        2.0 * g * g_y,
        2.0,
        2.0 * g_y * g_y + 2.0 * g * g_yy,
        2.0 * g_y,
    );
    let w = lv - 0.5 * gamma * lg2 + gamma * g * lg + lambda * phi;
    // ∂/∂μ_i and ∂/∂σ_i of the bracket in the W equation
    let foc_mean = sigma * y - gamma * sigma * sigma * m_hat - gamma * rho * v * sigma * g_y;
    let foc_std = -gamma * sigma * sigma * s_i + lambda * agents[i].distortion.l2_norm();
    [w, lg, foc_mean, foc_std]
}

/// Random discrete law `[(atom, mass)]` standardized to the given mean and
/// std.
pub fn random_discrete_law<R: Rng>(rng: &mut R, mean: f64, std: f64) -> Vec<(f64, f64)> {
    let n = rng.random_range(2..12);
    let mut atoms: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.random_range(-3.0..3.0f64).powi(3), rng.random_range(0.05..1.0)))
        .collect();
    let total: f64 = atoms.iter().map(|a| a.1).sum();
    for a in &mut atoms {
        a.1 /= total;
    }
    let m: f64 = atoms.iter().map(|a| a.0 * a.1).sum();
    let var: f64 = atoms.iter().map(|a| (a.0 - m).powi(2) * a.1).sum();
    let s = var.sqrt().max(1e-12);
    for a in &mut atoms {
        a.0 = mean + std * (a.0 - m) / s;
    }
    atoms
}

/// `Φ_h` of a discrete law: `Σ_k x_(k)·[h(S_{k−1}) − h(S_k)]` over atoms
/// sorted increasingly, with `S_k` the survival mass above the k-th atom.
pub fn phi_discrete_oracle(d: &Distortion, atoms: &[(f64, f64)]) -> f64 {
    let mut a = atoms.to_vec();
    a.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut above: f64 = 1.0;
    let mut sum = 0.0;
    for &(x, w) in &a {
        let next = (above - w).max(0.0);
        sum += x * (d.h(above) - d.h(next));
        above = next;
    }
    sum
}

/// Sample mean and standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

/// Trapezoid rule over `(x, f(x))` pairs.
pub fn trapezoid(points: &[(f64, f64)]) -> f64 {
    points.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum()
}
