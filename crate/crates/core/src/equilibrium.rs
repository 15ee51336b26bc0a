//! Closed-form Nash equilibrium of the two-agent game under the Gaussian
//! mean-return model.
//!
//! Each agent's auxiliary expectation and value function are quadratic in
//! the state,
//!
//! ```text
//! g_i = x̂ + ½a₂(t)y² + a₁(t)y + a₀(t)
//! V_i = x̂ + ½b₂(t)y² + b₁(t)y + b₀(t)
//! ```
//!
//! `a₁, a₂` have closed forms; `a₀` and the `b` coefficients are integrated
//! backward with RK4 from zero terminal values.

use std::io::{self, Write};
use std::sync::Arc;

use crate::choquet::{build_optimal_quantile, Distortion, DistortionPreset, QuantilePolicy};
use crate::error::{Error, Result};
use crate::grid::{one_minus_exp_ratio, rk4_backward, split_components, GridFn, TimeGrid};
use crate::market::{resolve_means, ActionLaw, AgentParams, GamePolicy, LambdaSchedule, MarketParams};

pub const DEFAULT_GRID_SIZE: usize = 4001;

/// Closed-form `(a₁(t), a₂(t))` at time-to-go `tau`.
pub fn a_closed_form(agent: &AgentParams, market: &MarketParams, tau: f64) -> (f64, f64) {
    let kappa = market.effective_reversion();
    let a2 = 2.0 * tau / agent.gamma * one_minus_exp_ratio(2.0 * kappa * tau);
    let r = one_minus_exp_ratio(kappa * tau);
    let a1 = market.iota * market.y_bar * tau * tau / agent.gamma * r * r;
    (a1, a2)
}

/// Equilibrium exploration std `λ_i(t)‖h_i′‖₂/(γ_i σ²)`.
pub fn equilibrium_std(agent: &AgentParams, sigma: f64, t: f64, horizon: f64) -> f64 {
    agent.lambda.at(t, horizon) * agent.distortion.l2_norm() / (agent.gamma * sigma * sigma)
}

/// Returns `(a₀, a₁, a₂)` on a `grid_size`-point grid over `[0, horizon]`.
pub fn solve_a_coeffs(
    agent: &AgentParams,
    market: &MarketParams,
    horizon: f64,
    grid_size: usize,
) -> Result<(GridFn, GridFn, GridFn)> {
    let grid = TimeGrid::new(horizon, grid_size)?;
    let kappa = market.effective_reversion();
    let iy = market.iota * market.y_bar;
    let a = |t: f64| a_closed_form(agent, market, horizon - t);
    let a2 = GridFn::from_fn(grid, |t| a(t).1, |t| 2.0 * kappa * a(t).1 - 2.0 / agent.gamma);
    let a1 = GridFn::from_fn(grid, |t| a(t).0, |t| {
        let (a1, a2) = a(t);
        kappa * a1 - iy * a2
    });
    let half_v2 = 0.5 * market.v * market.v;
    let (states, slopes) = rk4_backward(grid, [0.0], |t, _| {
        let (a1, a2) = a(t);
        [-iy * a1 - half_v2 * a2]
    });
    let [a0] = split_components(grid, &states, &slopes);
    Ok((a0, a1, a2))
}

/// Returns `(b₀, b₁, b₂)` for agent `i` given its `a` coefficients and the
/// opponent's exploration std `σ_j(t)`.
pub fn solve_b_coeffs(
    agent_i: &AgentParams,
    market: &MarketParams,
    horizon: f64,
    grid_size: usize,
    a1: &GridFn,
    a2: &GridFn,
    sigma_j: &dyn Fn(f64) -> f64,
) -> Result<(GridFn, GridFn, GridFn)> {
    let grid = TimeGrid::new(horizon, grid_size)?;
    if a1.grid() != grid || a2.grid() != grid {
        return Err(Error::Config("a coefficients live on a different grid".into()));
    }
    let MarketParams {
        sigma,
        iota,
        y_bar,
        v,
        rho,
        ..
    } = *market;
    let gamma = agent_i.gamma;
    let k = agent_i.k;
    let v2 = v * v;
    let one_m_rho2 = 1.0 - rho * rho;
    // state order: [b2, b1, b0]
    let (states, slopes) = rk4_backward(grid, [0.0; 3], |t, b| {
        let (a1t, a2t) = (a1.eval(t), a2.eval(t));
        let drift = 1.0 / gamma - rho * v * a2t;
        let s_i = equilibrium_std(agent_i, sigma, t, horizon);
        let s_j = sigma_j(t);
        let lambda = agent_i.lambda.at(t, horizon);
        let db2 = 2.0 * iota * b[0] - gamma * drift * drift + gamma * v2 * a2t * a2t;
        let db1 = iota * b[1] - iota * y_bar * b[0] + rho * v * a1t + gamma * one_m_rho2 * v2 * a1t * a2t;
        let db0 = -iota * y_bar * b[1] - 0.5 * v2 * b[0]
            + 0.5 * gamma * one_m_rho2 * v2 * a1t * a1t
            + 0.5 * gamma * sigma * sigma * (s_i * s_i + k * k * s_j * s_j)
            - lambda * s_i * agent_i.distortion.l2_norm();
        [db2, db1, db0]
    });
    let [b2, b1, b0] = split_components(grid, &states, &slopes);
    Ok((b0, b1, b2))
}

/// All six coefficient functions of one agent on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    pub a0: GridFn,
    pub a1: GridFn,
    pub a2: GridFn,
    pub b0: GridFn,
    pub b1: GridFn,
    pub b2: GridFn,
}

impl CoefficientSet {
    pub fn grid(&self) -> TimeGrid {
        self.a0.grid()
    }

    pub fn horizon(&self) -> f64 {
        self.grid().horizon
    }

    /// `[a₀, a₁, a₂]` at `t`.
    pub fn a_at(&self, t: f64) -> [f64; 3] {
        [self.a0.eval(t), self.a1.eval(t), self.a2.eval(t)]
    }

    /// `[b₀, b₁, b₂]` at `t`.
    pub fn b_at(&self, t: f64) -> [f64; 3] {
        [self.b0.eval(t), self.b1.eval(t), self.b2.eval(t)]
    }

    /// Writes `t,a0,a1,a2,b0,b1,b2` at every grid node.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,a0,a1,a2,b0,b1,b2")?;
        let cols = [&self.a0, &self.a1, &self.a2, &self.b0, &self.b1, &self.b2];
        for (k, t) in self.grid().times().enumerate() {
            write!(w, "{t}")?;
            for c in cols {
                write!(w, ",{}", c.values()[k])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Solves both agents' coefficient sets on a common grid.
pub fn solve_coefficients(
    agents: &[AgentParams; 2],
    market: &MarketParams,
    horizon: f64,
    grid_size: usize,
) -> Result<[CoefficientSet; 2]> {
    market.validate()?;
    for a in agents {
        a.validate()?;
    }
    let solve = |i: usize| -> Result<CoefficientSet> {
        let j = 1 - i;
        let (a0, a1, a2) = solve_a_coeffs(&agents[i], market, horizon, grid_size)?;
        let opponent = &agents[j];
        let sigma_j = |t: f64| equilibrium_std(opponent, market.sigma, t, horizon);
        let (b0, b1, b2) = solve_b_coeffs(&agents[i], market, horizon, grid_size, &a1, &a2, &sigma_j)?;
        Ok(CoefficientSet {
            a0,
            a1,
            a2,
            b0,
            b1,
            b2,
        })
    };
    Ok([solve(0)?, solve(1)?])
}

/// Right-hand side `y/(γ_iσ) − (ρv/σ)(a₂ⁱy + a₁ⁱ)` of agent `i`'s mean equation.
pub fn individual_response(agent: &AgentParams, market: &MarketParams, a1: f64, a2: f64, y: f64) -> f64 {
    y / (agent.gamma * market.sigma) - market.rho * market.v / market.sigma * (a2 * y + a1)
}

/// Solves `μ_i − k_iμ_j = c_i` for both agents.
pub fn equilibrium_means(
    t: f64,
    y: f64,
    agents: &[AgentParams; 2],
    market: &MarketParams,
    coeffs: &[CoefficientSet; 2],
) -> Result<[f64; 2]> {
    let c: [f64; 2] = std::array::from_fn(|i| {
        individual_response(&agents[i], market, coeffs[i].a1.eval(t), coeffs[i].a2.eval(t), y)
    });
    solve_mean_system([agents[0].k, agents[1].k], c)
}

/// Closed-form solution of `μ₁ − k₁μ₂ = c₁`, `μ₂ − k₂μ₁ = c₂`.
pub fn solve_mean_system(k: [f64; 2], c: [f64; 2]) -> Result<[f64; 2]> {
    resolve_means(
        &ActionLaw {
            base: c[0],
            coupling: k[0],
            std: 0.0,
        },
        &ActionLaw {
            base: c[1],
            coupling: k[1],
            std: 0.0,
        },
    )
}

#[derive(Debug)]
enum Responses {
    Gaussian {
        agents: [AgentParams; 2],
        market: MarketParams,
        coeffs: [CoefficientSet; 2],
    },
    Constant([f64; 2]),
}

impl Responses {
    fn at(&self, t: f64, y: f64) -> [f64; 2] {
        match self {
            Responses::Gaussian {
                agents,
                market,
                coeffs,
            } => std::array::from_fn(|i| {
                individual_response(&agents[i], market, coeffs[i].a1.eval(t), coeffs[i].a2.eval(t), y)
            }),
            Responses::Constant(c) => *c,
        }
    }
}

/// The equilibrium law of one agent: a location-scale family over its own
/// distortion with closed-form mean and std.
#[derive(Debug, Clone)]
pub struct EquilibriumPolicy {
    pub agent_index: usize,
    k: [f64; 2],
    gamma: f64,
    lambda: LambdaSchedule,
    sigma: f64,
    horizon: f64,
    distortion: Distortion,
    responses: Arc<Responses>,
}

impl EquilibriumPolicy {
    fn individual(&self, t: f64, y: f64) -> [f64; 2] {
        self.responses.at(t, y)
    }

    /// `μ_i*(t, y)`.
    pub fn mean(&self, t: f64, y: f64) -> f64 {
        let c = self.individual(t, y);
        let det = 1.0 - self.k[0] * self.k[1];
        let (i, j) = (self.agent_index, 1 - self.agent_index);
        (c[i] + self.k[i] * c[j]) / det
    }

    /// Both agents' equilibrium means at `(t, y)`.
    pub fn joint_means(&self, t: f64, y: f64) -> [f64; 2] {
        let c = self.individual(t, y);
        let det = 1.0 - self.k[0] * self.k[1];
        [(c[0] + self.k[0] * c[1]) / det, (c[1] + self.k[1] * c[0]) / det]
    }

    /// `σ_i*(t)`.
    pub fn std(&self, t: f64) -> f64 {
        self.lambda.at(t, self.horizon) * self.distortion.l2_norm() / (self.gamma * self.sigma * self.sigma)
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn law_at(&self, t: f64, y: f64) -> Result<QuantilePolicy> {
        build_optimal_quantile(&self.distortion, self.mean(t, y), self.std(t))
    }

    /// `μ_i*(t,y) + (λ_i(t)/(γ_iσ²))·h_i′(1−p)`.
    pub fn quantile(&self, t: f64, y: f64, p: f64) -> f64 {
        self.mean(t, y)
            + self.lambda.at(t, self.horizon) / (self.gamma * self.sigma * self.sigma) * self.distortion.weight(p)
    }

    pub fn density(&self, t: f64, y: f64, u: f64) -> Result<f64> {
        Ok(self.law_at(t, y)?.density(u))
    }

    /// `(u, density)` on `points` equispaced nodes: the exact support for
    /// bounded laws, `mean ± 10·std` otherwise.
    pub fn density_grid(&self, t: f64, y: f64, points: usize) -> Result<Vec<(f64, f64)>> {
        let law = self.law_at(t, y)?;
        density_grid(&law, points)
    }
}

/// `(u, density)` of a location-scale law on `points ≥ 2` nodes spanning its
/// support, or `mean ± 10·std` when the support is unbounded.
pub fn density_grid(law: &QuantilePolicy, points: usize) -> Result<Vec<(f64, f64)>> {
    if points < 2 {
        return Err(Error::Config("density grid needs at least 2 points".into()));
    }
    if !(law.std > 0.0) {
        return Err(Error::InvalidParameter("density of a point mass".into()));
    }
    let (lo, hi) = match law.distortion.preset() {
        Some(DistortionPreset::Gini) => (law.quantile(0.0), law.quantile(1.0)),
        _ => (law.mean - 10.0 * law.std, law.mean + 10.0 * law.std),
    };
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points)
        .map(|k| {
            let u = if k + 1 == points { hi } else { lo + k as f64 * step };
            (u, law.density(u))
        })
        .collect())
}

impl GamePolicy for EquilibriumPolicy {
    fn law(&self, t: f64, y: f64) -> ActionLaw {
        let i = self.agent_index;
        ActionLaw {
            base: self.individual(t, y)[i],
            coupling: self.k[i],
            std: self.std(t),
        }
    }

    fn distortion(&self) -> &Distortion {
        &self.distortion
    }
}

fn check_pair(agents: &[AgentParams; 2]) -> Result<()> {
    let prod = agents[0].k * agents[1].k;
    if prod >= 1.0 {
        return Err(Error::SingularSystem(prod));
    }
    Ok(())
}

/// Equilibrium policies of both agents sharing one coefficient solution.
pub fn equilibrium_pair(
    agents: &[AgentParams; 2],
    market: &MarketParams,
    coeffs: &[CoefficientSet; 2],
) -> Result<[EquilibriumPolicy; 2]> {
    check_pair(agents)?;
    let responses = Arc::new(Responses::Gaussian {
        agents: agents.clone(),
        market: *market,
        coeffs: coeffs.clone(),
    });
    let horizon = coeffs[0].horizon();
    Ok(std::array::from_fn(|i| EquilibriumPolicy {
        agent_index: i,
        k: [agents[0].k, agents[1].k],
        gamma: agents[i].gamma,
        lambda: agents[i].lambda,
        sigma: market.sigma,
        horizon,
        distortion: agents[i].distortion.clone(),
        responses: responses.clone(),
    }))
}

pub fn equilibrium_policy(
    agent_index: usize,
    agents: &[AgentParams; 2],
    market: &MarketParams,
    coeffs: &[CoefficientSet; 2],
) -> Result<EquilibriumPolicy> {
    if agent_index > 1 {
        return Err(Error::InvalidParameter(format!("agent index {agent_index}")));
    }
    let [p0, p1] = equilibrium_pair(agents, market, coeffs)?;
    Ok(if agent_index == 0 { p0 } else { p1 })
}

/// `(V_i, g_i)` at `(t, x̂, y)`.
pub fn value_functions(agent_index: usize, t: f64, x_hat: f64, y: f64, coeffs: &[CoefficientSet; 2]) -> (f64, f64) {
    let c = &coeffs[agent_index];
    let [a0, a1, a2] = c.a_at(t);
    let [b0, b1, b2] = c.b_at(t);
    (
        x_hat + 0.5 * b2 * y * y + b1 * y + b0,
        x_hat + 0.5 * a2 * y * y + a1 * y + a0,
    )
}

/// Equilibrium under constant drift `a` and volatility `b`: constant means
/// `((a−r)/b²)(1/γ_i + k_i/γ_j)/(1−k₁k₂)` and std `λ_i(t)‖h_i′‖₂/(γ_i b²)`.
pub fn black_scholes_policy(
    agents: &[AgentParams; 2],
    a: f64,
    b: f64,
    r: f64,
    horizon: f64,
) -> Result<[EquilibriumPolicy; 2]> {
    if !(b > 0.0) {
        return Err(Error::InvalidParameter(format!("volatility must be > 0, got {b}")));
    }
    check_pair(agents)?;
    let excess = (a - r) / (b * b);
    let responses = Arc::new(Responses::Constant([excess / agents[0].gamma, excess / agents[1].gamma]));
    Ok(std::array::from_fn(|i| EquilibriumPolicy {
        agent_index: i,
        k: [agents[0].k, agents[1].k],
        gamma: agents[i].gamma,
        lambda: agents[i].lambda,
        sigma: b,
        horizon,
        distortion: agents[i].distortion.clone(),
        responses: responses.clone(),
    }))
}
