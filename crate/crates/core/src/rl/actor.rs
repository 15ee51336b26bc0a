use serde::{Deserialize, Serialize};

use crate::choquet::{build_optimal_quantile, Distortion};
use crate::error::Result;
use crate::grid::one_minus_exp_ratio;
use crate::market::{ActionLaw, AgentParams, GamePolicy, MarketParams};

/// Actor parameters `Φ = (φ₀, φ₁, φ₂, φ₃)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActorParams {
    pub phi: [f64; 4],
}

impl ActorParams {
    pub fn new(phi: [f64; 4]) -> Self {
        Self { phi }
    }

    /// Parameters that reproduce the closed-form equilibrium:
    /// `(1/(γσ), ρv/(γσ), ι+ρv, ρvιȲ/(γσ))`.
    pub fn equilibrium(agent: &AgentParams, market: &MarketParams) -> Self {
        let gs = agent.gamma * market.sigma;
        let rv = market.rho * market.v;
        Self {
            phi: [1.0 / gs, rv / gs, market.iota + rv, rv * market.iota * market.y_bar / gs],
        }
    }

    /// Multiplies `φ_n` by `1 + (−1)ⁿ·rel`.
    pub fn perturbed(&self, rel: f64) -> Self {
        let mut phi = self.phi;
        for (n, p) in phi.iter_mut().enumerate() {
            *p *= if n % 2 == 0 { 1.0 + rel } else { 1.0 - rel };
        }
        Self { phi }
    }

    /// Own part of the mean, `φ₀y − φ₁(1−e^{−2φ₂τ})/φ₂·y − φ₃(1−e^{−φ₂τ})²/φ₂²`.
    pub fn own_mean(&self, t: f64, y: f64, horizon: f64) -> f64 {
        let [p0, p1, p2, p3] = self.phi;
        let tau = horizon - t;
        let r = one_minus_exp_ratio(p2 * tau);
        p0 * y - p1 * 2.0 * tau * one_minus_exp_ratio(2.0 * p2 * tau) * y - p3 * tau * tau * r * r
    }

    /// Coefficient `λ(t)φ₀²γ` of `h′(1−p)` in the quantile.
    pub fn scale(&self, agent: &AgentParams, t: f64, horizon: f64) -> f64 {
        agent.lambda.at(t, horizon) * self.phi[0] * self.phi[0] * agent.gamma
    }

    pub fn std(&self, agent: &AgentParams, t: f64, horizon: f64) -> f64 {
        self.scale(agent, t, horizon) * agent.distortion.l2_norm()
    }

    /// `Φ_h` of the actor law at `t`.
    pub fn regularizer(&self, agent: &AgentParams, t: f64, horizon: f64) -> f64 {
        self.std(agent, t, horizon) * agent.distortion.l2_norm()
    }

    /// Samples the actor law with uniform draw `u` given the opponent mean.
    pub fn sample(&self, agent: &AgentParams, t: f64, y: f64, mu_j: f64, u: f64, horizon: f64) -> Result<f64> {
        let mean = self.own_mean(t, y, horizon) + agent.k * mu_j;
        build_optimal_quantile(&agent.distortion, mean, self.std(agent, t, horizon))?.sample(u)
    }
}

/// `k_iμ_j + φ₀y − φ₁(1−e^{−2φ₂τ})/φ₂·y − φ₃(1−e^{−φ₂τ})²/φ₂² + λφ₀²γ·h′(1−p)`.
pub fn actor_quantile(phi: &ActorParams, agent: &AgentParams, t: f64, y: f64, mu_j: f64, p: f64, horizon: f64) -> f64 {
    phi.own_mean(t, y, horizon) + agent.k * mu_j + phi.scale(agent, t, horizon) * agent.distortion.weight(p)
}

/// An actor acting in the game.
#[derive(Debug, Clone)]
pub struct ActorPolicy {
    pub params: ActorParams,
    pub agent: AgentParams,
    pub horizon: f64,
}

impl GamePolicy for ActorPolicy {
    fn law(&self, t: f64, y: f64) -> ActionLaw {
        ActionLaw {
            base: self.params.own_mean(t, y, self.horizon),
            coupling: self.agent.k,
            std: self.params.std(&self.agent, t, self.horizon),
        }
    }

    fn distortion(&self) -> &Distortion {
        &self.agent.distortion
    }
}
