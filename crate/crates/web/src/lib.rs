//! Browser bindings for the equilibrium demo. Each export returns a flat
//! `Float64Array` of interleaved rows so the page can plot without parsing.

use choquet_nash::equilibrium::{equilibrium_pair, solve_coefficients, EquilibriumPolicy};
use choquet_nash::policy_iter::{run_response_iteration, ResponseInit};
use choquet_nash::grid::TimeGrid;
use choquet_nash::{AgentParams, Distortion, LambdaSchedule, MarketParams, Result};
use wasm_bindgen::prelude::*;

const GRID: usize = 1001;

/// Preferences of both agents; agent 1 explores with a normal law and
/// agent 2 with a uniform one.
#[wasm_bindgen]
#[derive(Debug, Clone, Copy)]
pub struct Game {
    pub gamma1: f64,
    pub k1: f64,
    pub gamma2: f64,
    pub k2: f64,
    pub lambda0: f64,
    pub horizon: f64,
}

#[wasm_bindgen]
impl Game {
    #[wasm_bindgen(constructor)]
    pub fn new(gamma1: f64, k1: f64, gamma2: f64, k2: f64, lambda0: f64, horizon: f64) -> Game {
        Game { gamma1, k1, gamma2, k2, lambda0, horizon }
    }

    /// Rows `(u, density)` of agent `agent`'s equilibrium law at `(t, y)`.
    #[wasm_bindgen(js_name = densityCurve)]
    pub fn density_curve_js(&self, agent: usize, t: f64, y: f64, points: usize) -> std::result::Result<Vec<f64>, JsError> {
        self.density_curve(agent, t, y, points).map_err(js)
    }

    /// Rows `(t, μ₁, μ₂)` of the equilibrium means at fixed `y`.
    #[wasm_bindgen(js_name = meanCurves)]
    pub fn mean_curves_js(&self, y: f64, points: usize) -> std::result::Result<Vec<f64>, JsError> {
        self.mean_curves(y, points).map_err(js)
    }

    /// Rows `(n, err a₁, err a₂, bound)` of agent `agent`'s response
    /// iteration under correlation `rho` and volatility `v`.
    #[wasm_bindgen(js_name = responseErrors)]
    pub fn response_errors_js(&self, agent: usize, rho: f64, v: f64, iterations: usize) -> std::result::Result<Vec<f64>, JsError> {
        self.response_errors(agent, rho, v, iterations).map_err(js)
    }
}

fn js(e: choquet_nash::Error) -> JsError {
    JsError::new(&e.to_string())
}

impl Game {
    pub fn agents(&self) -> [AgentParams; 2] {
        let lambda = LambdaSchedule::Exponential { lambda0: self.lambda0 };
        [
            AgentParams {
                gamma: self.gamma1,
                k: self.k1,
                lambda,
                distortion: Distortion::normal(),
            },
            AgentParams {
                gamma: self.gamma2,
                k: self.k2,
                lambda,
                distortion: Distortion::gini(),
            },
        ]
    }

    fn policies(&self) -> Result<[EquilibriumPolicy; 2]> {
        let agents = self.agents();
        let market = MarketParams::table1();
        let coeffs = solve_coefficients(&agents, &market, self.horizon, GRID)?;
        equilibrium_pair(&agents, &market, &coeffs)
    }

    pub fn density_curve(&self, agent: usize, t: f64, y: f64, points: usize) -> Result<Vec<f64>> {
        let pols = self.policies()?;
        let pol = pols.get(agent).ok_or_else(|| bad_agent(agent))?;
        Ok(pol.density_grid(t, y, points)?.into_iter().flat_map(|(u, d)| [u, d]).collect())
    }

    pub fn mean_curves(&self, y: f64, points: usize) -> Result<Vec<f64>> {
        let pols = self.policies()?;
        let grid = TimeGrid::new(self.horizon, points.max(2))?;
        Ok(grid
            .times()
            .flat_map(|t| {
                let [m1, m2] = pols[0].joint_means(t, y);
                [t, m1, m2]
            })
            .collect())
    }

    pub fn response_errors(&self, agent: usize, rho: f64, v: f64, iterations: usize) -> Result<Vec<f64>> {
        let agents = self.agents();
        let a = agents.get(agent).ok_or_else(|| bad_agent(agent))?;
        let market = MarketParams { rho, v, ..MarketParams::table1() };
        let init = ResponseInit::zero(TimeGrid::new(self.horizon, GRID)?, 1.0);
        let h = run_response_iteration(a, &market, self.horizon, GRID, init, iterations, 0.0)?;
        Ok(h.states
            .iter()
            .flat_map(|s| [s.n as f64, s.sup_error_a1, s.sup_error_a2, s.bound_a2])
            .collect())
    }
}

fn bad_agent(agent: usize) -> choquet_nash::Error {
    choquet_nash::Error::InvalidParameter(format!("agent index must be 0 or 1, got {agent}"))
}
