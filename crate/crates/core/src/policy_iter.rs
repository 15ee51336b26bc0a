//! Policy iteration for the Gaussian mean-return game.
//!
//! Response iteration keeps the opponent fixed and updates one agent's mean
//! coefficients `(a₁ⁿ, a₂ⁿ)` by solving a linear ODE system forced by the
//! previous iterate. Simultaneous iteration updates both agents' means at
//! once through the contraction `μⁿ⁺¹ = Kμⁿ + c`, `K = [[0, k₁], [k₂, 0]]`.
//! Both come with explicit error envelopes that are checked numerically.

use std::io::{self, Write};

use crate::equilibrium::{a_closed_form, equilibrium_means, individual_response, CoefficientSet};
use crate::error::{Error, Result};
use crate::grid::{rk4_backward, split_components, GridFn, TimeGrid};
use crate::market::{AgentParams, MarketParams};

/// Slack added to every envelope for RK4 and interpolation error.
pub const INTEGRATION_SLACK: f64 = 1e-9;

/// One response-iteration step: solves
/// `a₂ⁿ′ = 2ιa₂ⁿ + 2ρv·a₂ⁿ⁻¹ − 2/γ`, `a₁ⁿ′ = ιa₁ⁿ + ρv·a₁ⁿ⁻¹ − ιȲa₂ⁿ`
/// backward from zero.
pub fn iterate_response(
    prev: (&GridFn, &GridFn),
    agent: &AgentParams,
    market: &MarketParams,
    horizon: f64,
    grid_size: usize,
) -> Result<(GridFn, GridFn)> {
    let grid = TimeGrid::new(horizon, grid_size)?;
    let (p1, p2) = prev;
    if p1.grid() != grid || p2.grid() != grid {
        return Err(Error::Config("previous iterate lives on a different grid".into()));
    }
    let MarketParams {
        iota, y_bar, v, rho, ..
    } = *market;
    let g = agent.gamma;
    let (states, slopes) = rk4_backward(grid, [0.0; 2], |t, a| {
        [
            2.0 * iota * a[0] + 2.0 * rho * v * p2.eval(t) - 2.0 / g,
            iota * a[1] + rho * v * p1.eval(t) - iota * y_bar * a[0],
        ]
    });
    let [a2, a1] = split_components(grid, &states, &slopes);
    Ok((a1, a2))
}

/// Starting point of a response iteration.
#[derive(Debug, Clone)]
pub struct ResponseInit {
    pub a1: GridFn,
    pub a2: GridFn,
    /// Scale of `h′(1−p)` in the initial quantile.
    pub theta0: f64,
}

impl ResponseInit {
    pub fn zero(grid: TimeGrid, theta0: f64) -> Self {
        Self {
            a1: GridFn::zeros(grid),
            a2: GridFn::zeros(grid),
            theta0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct IterateState {
    pub n: usize,
    pub a1: GridFn,
    pub a2: GridFn,
    pub sup_error_a1: f64,
    pub sup_error_a2: f64,
    /// `(2|ρ|vT)ⁿ/n!·M`
    pub bound_a2: f64,
    /// `(|ρ|vT)ⁿ/n!·m + (ιȲ/(|ρ|v))(2|ρ|vT)ⁿ⁺¹/(n+1)!·M`
    pub bound_a1: f64,
}

impl IterateState {
    pub fn sup_error(&self) -> f64 {
        self.sup_error_a1.max(self.sup_error_a2)
    }
}

#[derive(Debug, Clone)]
pub struct ResponseHistory {
    pub states: Vec<IterateState>,
    pub converged: bool,
    pub tol: f64,
    pub theta0: f64,
    /// Initial sup error of `a₂`.
    pub big_m: f64,
    /// Initial sup error of `a₁`.
    pub small_m: f64,
    /// `2ρvT` with its sign.
    pub signed_rate: f64,
}

impl ResponseHistory {
    pub fn last(&self) -> &IterateState {
        self.states.last().expect("history is never empty")
    }

    /// Iterations performed.
    pub fn iterations(&self) -> usize {
        self.last().n
    }

    /// Index of the first iterate whose error exceeds its envelope, if any.
    pub fn first_violation(&self) -> Option<usize> {
        self.states
            .iter()
            .find(|s| s.sup_error_a2 > s.bound_a2 + INTEGRATION_SLACK || s.sup_error_a1 > s.bound_a1 + INTEGRATION_SLACK)
            .map(|s| s.n)
    }

    pub fn certified(&self) -> bool {
        self.converged && self.first_violation().is_none()
    }

    /// Whether `a₂` errors exceed the bound written with signed `ρ`.
    pub fn signed_bound_violated(&self) -> bool {
        self.states.iter().any(|s| {
            let bound = self.signed_rate.powi(s.n as i32) / factorial(s.n) * self.big_m;
            s.sup_error_a2 > bound + INTEGRATION_SLACK
        })
    }

    /// Std of the iterate law at step `n`: `θ⁰‖h′‖₂` initially, the
    /// equilibrium std afterwards.
    pub fn policy_std(&self, n: usize, agent: &AgentParams, market: &MarketParams, t: f64, horizon: f64) -> f64 {
        let norm = agent.distortion.l2_norm();
        if n == 0 {
            self.theta0 * norm
        } else {
            agent.lambda.at(t, horizon) * norm / (agent.gamma * market.sigma * market.sigma)
        }
    }
}

/// Mean of the `n`-th iterate law against a fixed opponent mean `μ_j`.
pub fn iterate_mean(state: &IterateState, agent: &AgentParams, market: &MarketParams, t: f64, y: f64, mu_j: f64) -> f64 {
    individual_response(agent, market, state.a1.eval(t), state.a2.eval(t), y) + agent.k * mu_j
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Iterates from `init` until the sup error against the closed-form
/// coefficients drops below `tol` or `n_max` steps have been taken.
pub fn run_response_iteration(
    agent: &AgentParams,
    market: &MarketParams,
    horizon: f64,
    grid_size: usize,
    init: ResponseInit,
    n_max: usize,
    tol: f64,
) -> Result<ResponseHistory> {
    if n_max < 1 {
        return Err(Error::Config("n_max must be >= 1".into()));
    }
    let grid = TimeGrid::new(horizon, grid_size)?;
    let kappa = market.effective_reversion();
    let iy = market.iota * market.y_bar;
    let exact = |t: f64| a_closed_form(agent, market, horizon - t);
    let a2_star = GridFn::from_fn(grid, |t| exact(t).1, |t| 2.0 * kappa * exact(t).1 - 2.0 / agent.gamma);
    let a1_star = GridFn::from_fn(grid, |t| exact(t).0, |t| {
        let (a1, a2) = exact(t);
        kappa * a1 - iy * a2
    });
    let big_m = init.a2.sup_distance(&a2_star)?;
    let small_m = init.a1.sup_distance(&a1_star)?;
    let rv = (market.rho * market.v).abs();
    let rate = 2.0 * rv * horizon;
    let bounds = |n: usize| {
        let b2 = rate.powi(n as i32) / factorial(n) * big_m;
        let b1 = if rv > 0.0 {
            (rv * horizon).powi(n as i32) / factorial(n) * small_m
                + iy / rv * rate.powi(n as i32 + 1) / factorial(n + 1) * big_m
        } else if n == 0 {
            small_m
        } else {
            // ρv = 0: the first iterate is exact
            0.0
        };
        (b1, b2)
    };
    let (b1, b2) = bounds(0);
    let mut states = vec![IterateState {
        n: 0,
        sup_error_a1: small_m,
        sup_error_a2: big_m,
        a1: init.a1,
        a2: init.a2,
        bound_a1: b1,
        bound_a2: b2,
    }];
    let mut converged = states[0].sup_error() < tol;
    while !converged && states.len() <= n_max {
        let prev = states.last().unwrap();
        let (a1, a2) = iterate_response((&prev.a1, &prev.a2), agent, market, horizon, grid_size)?;
        let n = prev.n + 1;
        let (b1, b2) = bounds(n);
        let state = IterateState {
            n,
            sup_error_a1: a1.sup_distance(&a1_star)?,
            sup_error_a2: a2.sup_distance(&a2_star)?,
            a1,
            a2,
            bound_a1: b1,
            bound_a2: b2,
        };
        converged = state.sup_error() < tol;
        states.push(state);
    }
    Ok(ResponseHistory {
        states,
        converged,
        tol,
        theta0: init.theta0,
        big_m,
        small_m,
        signed_rate: 2.0 * market.rho * market.v * horizon,
    })
}

/// Error record of the simultaneous mean iteration on a `(t, y)` lattice.
#[derive(Debug, Clone)]
pub struct MeanHistory {
    /// `sup |μⁿ − μ*|` over both agents and all lattice nodes, `n = 0..`.
    pub errors: Vec<f64>,
    /// `max{k₁, k₂}`.
    pub rate: f64,
    /// Final iterate, `[agent][node]` with nodes ordered by time then state.
    pub final_means: [Vec<f64>; 2],
}

impl MeanHistory {
    pub fn omega(&self) -> f64 {
        self.errors[0]
    }

    pub fn bound(&self, n: usize) -> f64 {
        self.omega() * self.rate.powi(n as i32)
    }

    /// Ratios `eₙ₊₁/eₙ`, skipping steps whose error is already at round-off.
    pub fn ratios(&self) -> Vec<f64> {
        self.errors
            .windows(2)
            .filter(|w| w[0] > 1e-13)
            .map(|w| w[1] / w[0])
            .collect()
    }

    pub fn certified(&self) -> bool {
        let envelope = self
            .errors
            .iter()
            .enumerate()
            .all(|(n, &e)| e <= self.bound(n) + 1e-12);
        let ratios = self.ratios().iter().all(|&r| r <= self.rate + 1e-9);
        envelope && ratios
    }
}

/// Runs `n_max` steps of `μⁿ⁺¹ = Kμⁿ + c` at every node of the time grid
/// of `coeffs` crossed with `y_slice`, starting from `initial(agent, t, y)`.
pub fn simultaneous_mean_iteration(
    agents: &[AgentParams; 2],
    market: &MarketParams,
    coeffs: &[CoefficientSet; 2],
    y_slice: &[f64],
    initial: &dyn Fn(usize, f64, f64) -> f64,
    n_max: usize,
) -> Result<MeanHistory> {
    let k = [agents[0].k, agents[1].k];
    for &ki in &k {
        if !(ki > 0.0 && ki < 1.0) {
            return Err(Error::InvalidParameter(format!("k must lie in (0, 1), got {ki}")));
        }
    }
    let grid = coeffs[0].grid();
    let mut c = [Vec::new(), Vec::new()];
    let mut target = [Vec::new(), Vec::new()];
    let mut mu = [Vec::new(), Vec::new()];
    for t in grid.times() {
        for &y in y_slice {
            let star = equilibrium_means(t, y, agents, market, coeffs)?;
            for i in 0..2 {
                let ci = &coeffs[i];
                c[i].push(individual_response(&agents[i], market, ci.a1.eval(t), ci.a2.eval(t), y));
                target[i].push(star[i]);
                mu[i].push(initial(i, t, y));
            }
        }
    }
    let sup_err = |mu: &[Vec<f64>; 2]| {
        (0..2)
            .flat_map(|i| mu[i].iter().zip(&target[i]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max)
    };
    let mut errors = vec![sup_err(&mu)];
    for _ in 0..n_max {
        let next: [Vec<f64>; 2] = std::array::from_fn(|i| {
            let j = 1 - i;
            mu[j].iter().zip(&c[i]).map(|(mj, ci)| k[i] * mj + ci).collect()
        });
        mu = next;
        errors.push(sup_err(&mu));
    }
    Ok(MeanHistory {
        errors,
        rate: k[0].max(k[1]),
        final_means: mu,
    })
}

/// Writes `n,sup_err_a1,sup_err_a2,factorial_bound,sup_err_mu,geometric_bound`,
/// leaving cells empty where one history is shorter than the other.
pub fn write_history_csv<W: Write>(
    mut w: W,
    response: Option<&ResponseHistory>,
    means: Option<&MeanHistory>,
) -> io::Result<()> {
    writeln!(w, "n,sup_err_a1,sup_err_a2,factorial_bound,sup_err_mu,geometric_bound")?;
    let n_resp = response.map_or(0, |r| r.states.len());
    let n_mean = means.map_or(0, |m| m.errors.len());
    for n in 0..n_resp.max(n_mean) {
        write!(w, "{n}")?;
        match response.and_then(|r| r.states.get(n)) {
            Some(s) => write!(w, ",{},{},{}", s.sup_error_a1, s.sup_error_a2, s.bound_a2)?,
            None => write!(w, ",,,")?,
        }
        match means.filter(|m| n < m.errors.len()) {
            Some(m) => writeln!(w, ",{},{}", m.errors[n], m.bound(n))?,
            None => writeln!(w, ",,")?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choquet::Distortion;
    use crate::market::LambdaSchedule;

    fn agent() -> AgentParams {
        AgentParams {
            gamma: 2.0,
            k: 0.1,
            lambda: LambdaSchedule::Exponential { lambda0: 0.01 },
            distortion: Distortion::normal(),
        }
    }

    #[test]
    fn zero_coupling_converges_in_one_step() {
        let market = MarketParams {
            rho: 0.0,
            ..MarketParams::table1()
        };
        let grid = TimeGrid::new(20.0, 2001).unwrap();
        let h = run_response_iteration(&agent(), &market, 20.0, 2001, ResponseInit::zero(grid, 1.0), 10, 1e-6).unwrap();
        assert!(h.converged);
        assert_eq!(h.iterations(), 1);
    }

    #[test]
    fn loose_tolerance_stops_immediately() {
        let grid = TimeGrid::new(20.0, 401).unwrap();
        let h = run_response_iteration(
            &agent(),
            &MarketParams::table1(),
            20.0,
            401,
            ResponseInit::zero(grid, 1.0),
            10,
            1e3,
        )
        .unwrap();
        assert_eq!(h.iterations(), 0);
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let g1 = TimeGrid::new(1.0, 11).unwrap();
        let z = GridFn::zeros(g1);
        assert!(iterate_response((&z, &z), &agent(), &MarketParams::table1(), 1.0, 21).is_err());
    }

    #[test]
    fn history_csv_pads_short_series() {
        let grid = TimeGrid::new(1.0, 51).unwrap();
        let h = run_response_iteration(
            &agent(),
            &MarketParams::table1(),
            1.0,
            51,
            ResponseInit::zero(grid, 1.0),
            3,
            0.0,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_history_csv(&mut buf, Some(&h), None).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().count(), 5);
        assert!(s.lines().nth(1).unwrap().ends_with(",,"));
    }
}
