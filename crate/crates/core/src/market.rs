//! The Gaussian mean-return market, sampled-action wealth paths and Monte
//! Carlo estimation of the regularized mean-variance objective.
//!
//! The state `Y` is an Ornstein–Uhlenbeck process correlated with the
//! asset's Brownian driver; the discounted price follows
//! `dS̃/S̃ = σY dt + σ dB`.

use std::io::{self, Write};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::choquet::{build_optimal_quantile, Distortion};
use crate::error::{ensure, Error, Result};

/// Episodes whose wealth leaves `[-WEALTH_GUARD, WEALTH_GUARD]` are aborted.
pub const WEALTH_GUARD: f64 = 1e12;

/// Constants of the Gaussian mean-return model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketParams {
    pub r: f64,
    pub sigma: f64,
    pub iota: f64,
    pub y_bar: f64,
    pub v: f64,
    pub rho: f64,
}

impl MarketParams {
    /// Market used for the equilibrium experiments (`ρ = −0.93`, `σ = 0.15`,
    /// `ι = 0.27`, `v = 0.065`, `Ȳ = 0.273`, `r = 0.017`).
    pub fn table1() -> Self {
        Self {
            r: 0.017,
            sigma: 0.15,
            iota: 0.27,
            y_bar: 0.273,
            v: 0.065,
            rho: -0.93,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [self.r, self.sigma, self.iota, self.y_bar, self.v, self.rho]
            .iter()
            .all(|x| x.is_finite());
        ensure(all_finite, || "market parameters must be finite".into())?;
        ensure(self.sigma > 0.0, || format!("sigma must be > 0, got {}", self.sigma))?;
        ensure(self.iota >= 0.0, || format!("iota must be >= 0, got {}", self.iota))?;
        ensure(self.v >= 0.0, || format!("v must be >= 0, got {}", self.v))?;
        ensure((-1.0..=1.0).contains(&self.rho), || {
            format!("rho must lie in [-1, 1], got {}", self.rho)
        })
    }

    /// `ι + ρv`, the effective mean-reversion rate of the hedging demand.
    pub fn effective_reversion(&self) -> f64 {
        self.iota + self.rho * self.v
    }

    /// Advances `(Y, S̃)` over `dt` given standard-normal shocks `(ξ, ξ̃)`:
    /// Euler–Maruyama for `Y`, log-Euler for the discounted price.
    pub fn step(&self, y: f64, s_disc: f64, dt: f64, xi: f64, xi_tilde: f64) -> (f64, f64) {
        let sq = dt.sqrt();
        let db = sq * xi;
        let db_tilde = sq * xi_tilde;
        let y_next = y
            + self.iota * (self.y_bar - y) * dt
            + self.v * (self.rho * db + (1.0 - self.rho * self.rho).max(0.0).sqrt() * db_tilde);
        let s_next = s_disc * ((self.sigma * y - 0.5 * self.sigma * self.sigma) * dt + self.sigma * db).exp();
        (y_next, s_next)
    }
}

/// Exploration weight `t ↦ λ(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum LambdaSchedule {
    Constant { value: f64 },
    /// `λ₀ e^{λ₀(T−t)}`
    Exponential { lambda0: f64 },
    /// `λ₀ (T+c)^{λ₀} / (t+c)^{λ₀+1}`
    Power { lambda0: f64, offset: f64 },
}

impl LambdaSchedule {
    pub fn at(&self, t: f64, horizon: f64) -> f64 {
        match *self {
            LambdaSchedule::Constant { value } => value,
            LambdaSchedule::Exponential { lambda0 } => lambda0 * (lambda0 * (horizon - t)).exp(),
            LambdaSchedule::Power { lambda0, offset } => {
                lambda0 * (horizon + offset).powf(lambda0) / (t + offset).powf(lambda0 + 1.0)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            LambdaSchedule::Constant { value } => value > 0.0 && value.is_finite(),
            LambdaSchedule::Exponential { lambda0 } => lambda0 > 0.0 && lambda0.is_finite(),
            LambdaSchedule::Power { lambda0, offset } => {
                lambda0 > 0.0 && offset > 0.0 && lambda0.is_finite() && offset.is_finite()
            }
        };
        ensure(ok, || format!("exploration schedule {self:?} must be positive"))
    }
}

/// Preferences of one agent.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentParams {
    /// Risk aversion `γ > 0`.
    pub gamma: f64,
    /// Sensitivity to the opponent's wealth, `k ∈ (0, 1)`.
    pub k: f64,
    pub lambda: LambdaSchedule,
    pub distortion: Distortion,
}

impl AgentParams {
    pub fn validate(&self) -> Result<()> {
        ensure(self.gamma > 0.0 && self.gamma.is_finite(), || {
            format!("gamma must be > 0, got {}", self.gamma)
        })?;
        ensure(self.k > 0.0 && self.k < 1.0, || format!("k must lie in (0, 1), got {}", self.k))?;
        self.lambda.validate()
    }

    /// `ϑ` such that `Φ_h(law) = std·ϑ` for a location-scale law over `shape`.
    pub fn regularizer_factor(&self, shape: &Distortion) -> Result<f64> {
        self.distortion.phi_of_unit_law(shape)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub horizon: f64,
    pub n_steps: usize,
    pub seed: u64,
    pub x1_0: f64,
    pub x2_0: f64,
    pub y_0: f64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        ensure(self.horizon > 0.0 && self.horizon.is_finite(), || {
            format!("horizon must be > 0, got {}", self.horizon)
        })?;
        ensure(self.n_steps >= 1, || "n_steps must be >= 1".into())
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.n_steps as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        if k == self.n_steps {
            self.horizon
        } else {
            k as f64 * self.dt()
        }
    }
}

/// Independent generator for episode `m` of a run seeded with `seed`.
pub fn episode_rng(seed: u64, episode: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(episode);
    rng
}

/// Sampled state and discounted price on the grid `t_0..t_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketPath {
    pub times: Vec<f64>,
    pub y: Vec<f64>,
    pub s_disc: Vec<f64>,
}

impl MarketPath {
    /// Relative discounted-price change over step `k`.
    pub fn price_return(&self, k: usize) -> f64 {
        (self.s_disc[k + 1] - self.s_disc[k]) / self.s_disc[k]
    }
}

pub fn simulate_state_and_price<R: Rng + ?Sized>(
    params: &MarketParams,
    cfg: &SimConfig,
    rng: &mut R,
) -> Result<MarketPath> {
    let n = cfg.n_steps;
    let dt = cfg.dt();
    let mut path = MarketPath {
        times: (0..=n).map(|k| cfg.time(k)).collect(),
        y: Vec::with_capacity(n + 1),
        s_disc: Vec::with_capacity(n + 1),
    };
    let (mut y, mut s) = (cfg.y_0, 1.0);
    path.y.push(y);
    path.s_disc.push(s);
    for k in 0..n {
        let xi: f64 = StandardNormal.sample(rng);
        let xi_tilde: f64 = StandardNormal.sample(rng);
        (y, s) = params.step(y, s, dt, xi, xi_tilde);
        if !y.is_finite() || !s.is_finite() || s <= 0.0 {
            return Err(Error::SimulationDiverged {
                step: k + 1,
                detail: format!("state {y}, discounted price {s}"),
            });
        }
        path.y.push(y);
        path.s_disc.push(s);
    }
    Ok(path)
}

/// One discounted-wealth update `x + u·(S̃_{k+1} − S̃_k)/S̃_k`.
pub fn step_wealth(x_prev: f64, action: f64, price_prev: f64, price_next: f64) -> Result<f64> {
    if !(price_prev > 0.0) {
        return Err(Error::InvalidPrice(price_prev));
    }
    Ok(x_prev + action * (price_next - price_prev) / price_prev)
}

/// Law of one agent's action at a state, as a function of the opponent's
/// mean action: the mean is `base + coupling·μ_opponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionLaw {
    pub base: f64,
    pub coupling: f64,
    pub std: f64,
}

/// A randomized feedback policy whose laws are location-scale families over
/// a fixed distortion.
pub trait GamePolicy {
    fn law(&self, t: f64, y: f64) -> ActionLaw;
    fn distortion(&self) -> &Distortion;
}

/// Resolves the two agents' means when each responds linearly to the other.
pub fn resolve_means(first: &ActionLaw, second: &ActionLaw) -> Result<[f64; 2]> {
    let det = 1.0 - first.coupling * second.coupling;
    if det <= 0.0 {
        return Err(Error::SingularSystem(first.coupling * second.coupling));
    }
    Ok([
        (first.base + first.coupling * second.base) / det,
        (second.base + second.coupling * first.base) / det,
    ])
}

/// A time- and state-independent law.
#[derive(Debug, Clone)]
pub struct FixedLaw {
    pub mean: f64,
    pub std: f64,
    pub distortion: Distortion,
}

impl FixedLaw {
    pub fn point_mass(at: f64) -> Self {
        Self {
            mean: at,
            std: 0.0,
            distortion: Distortion::normal(),
        }
    }
}

impl GamePolicy for FixedLaw {
    fn law(&self, _t: f64, _y: f64) -> ActionLaw {
        ActionLaw {
            base: self.mean,
            coupling: 0.0,
            std: self.std,
        }
    }

    fn distortion(&self) -> &Distortion {
        &self.distortion
    }
}

/// One simulated episode of the game.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub y: Vec<f64>,
    pub s_disc: Vec<f64>,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub actions1: Vec<f64>,
    pub actions2: Vec<f64>,
    /// Uniform draws behind each sampled action, kept for coupled replays.
    pub uniforms: [Vec<f64>; 2],
    /// Resolved mean action of each agent per step.
    pub means: [Vec<f64>; 2],
    /// Standard deviation of each agent's action law per step.
    pub stds: [Vec<f64>; 2],
}

impl Trajectory {
    pub fn n_steps(&self) -> usize {
        self.actions1.len()
    }

    pub fn dt(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    pub fn wealth(&self, agent: usize) -> &[f64] {
        if agent == 0 {
            &self.x1
        } else {
            &self.x2
        }
    }

    pub fn actions(&self, agent: usize) -> &[f64] {
        if agent == 0 {
            &self.actions1
        } else {
            &self.actions2
        }
    }

    pub fn price_return(&self, k: usize) -> f64 {
        (self.s_disc[k + 1] - self.s_disc[k]) / self.s_disc[k]
    }

    /// Wealth gap `x_i − k_i x_j` at every node.
    pub fn wealth_gap(&self, agent: usize, k_i: f64) -> Vec<f64> {
        let (own, other) = (self.wealth(agent), self.wealth(1 - agent));
        own.iter().zip(other).map(|(a, b)| a - k_i * b).collect()
    }

    /// Writes `t,y,s_disc,x1,x2,u1,u2`; the action columns of the final row
    /// are empty.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,y,s_disc,x1,x2,u1,u2")?;
        let n = self.n_steps();
        for k in 0..=n {
            write!(
                w,
                "{},{},{},{},{}",
                self.times[k], self.y[k], self.s_disc[k], self.x1[k], self.x2[k]
            )?;
            if k < n {
                writeln!(w, ",{},{}", self.actions1[k], self.actions2[k])?;
            } else {
                writeln!(w, ",,")?;
            }
        }
        Ok(())
    }
}

fn draw_uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// Simulates one episode: both agents draw actions by inverse transform from
/// their policy laws and wealth is advanced with [`step_wealth`].
pub fn simulate_game<R: Rng + ?Sized>(
    params: &MarketParams,
    policies: [&dyn GamePolicy; 2],
    cfg: &SimConfig,
    rng: &mut R,
) -> Result<Trajectory> {
    let market = simulate_state_and_price(params, cfg, rng)?;
    play_on_path(market, policies, cfg, rng)
}

/// Plays both policies on an existing market path.
pub fn play_on_path<R: Rng + ?Sized>(
    market: MarketPath,
    policies: [&dyn GamePolicy; 2],
    cfg: &SimConfig,
    rng: &mut R,
) -> Result<Trajectory> {
    let n = market.times.len() - 1;
    let mut traj = Trajectory {
        x1: Vec::with_capacity(n + 1),
        x2: Vec::with_capacity(n + 1),
        actions1: Vec::with_capacity(n),
        actions2: Vec::with_capacity(n),
        uniforms: [Vec::with_capacity(n), Vec::with_capacity(n)],
        means: [Vec::with_capacity(n), Vec::with_capacity(n)],
        stds: [Vec::with_capacity(n), Vec::with_capacity(n)],
        times: market.times,
        y: market.y,
        s_disc: market.s_disc,
    };
    let (mut x1, mut x2) = (cfg.x1_0, cfg.x2_0);
    traj.x1.push(x1);
    traj.x2.push(x2);
    for k in 0..n {
        let (t, y) = (traj.times[k], traj.y[k]);
        let laws = [policies[0].law(t, y), policies[1].law(t, y)];
        let means = resolve_means(&laws[0], &laws[1])?;
        let mut actions = [0.0; 2];
        for i in 0..2 {
            let u = draw_uniform(rng);
            let q = build_optimal_quantile(policies[i].distortion(), means[i], laws[i].std)?;
            actions[i] = q.sample(u)?;
            traj.uniforms[i].push(u);
            traj.means[i].push(means[i]);
            traj.stds[i].push(laws[i].std);
        }
        x1 = step_wealth(x1, actions[0], traj.s_disc[k], traj.s_disc[k + 1])?;
        x2 = step_wealth(x2, actions[1], traj.s_disc[k], traj.s_disc[k + 1])?;
        if !(x1.abs() <= WEALTH_GUARD && x2.abs() <= WEALTH_GUARD) {
            return Err(Error::SimulationDiverged {
                step: k + 1,
                detail: format!("wealth ({x1}, {x2})"),
            });
        }
        traj.actions1.push(actions[0]);
        traj.actions2.push(actions[1]);
        traj.x1.push(x1);
        traj.x2.push(x2);
    }
    Ok(traj)
}

/// Monte Carlo estimate of an agent's regularized objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveEstimate {
    pub value: f64,
    /// Delta-method standard error of `value`.
    pub std_error: f64,
    pub mean_terminal_gap: f64,
    pub var_terminal_gap: f64,
    pub mean_regularizer: f64,
    pub episodes: usize,
}

/// Estimates `E[∫λΦ_h(Π_i)ds + X̂_i(T)] − (γ_i/2)Var[X̂_i(T)]` from
/// `n_episodes` simulated games.
///
/// The regularizer is integrated with a left Riemann sum on the simulation
/// grid. `Φ_{h_i}` of each location-scale action law is `std·ϑ`, where
/// `ϑ` is `‖h_i′‖₂` when the policy's shape is `h_i` and a quadrature
/// constant otherwise.
pub fn estimate_objective<R: Rng + ?Sized>(
    agent_index: usize,
    agents: &[AgentParams; 2],
    policies: [&dyn GamePolicy; 2],
    params: &MarketParams,
    cfg: &SimConfig,
    n_episodes: usize,
    rng: &mut R,
) -> Result<ObjectiveEstimate> {
    if n_episodes < 2 {
        return Err(Error::Config("estimate_objective needs at least 2 episodes".into()));
    }
    if agent_index > 1 {
        return Err(Error::InvalidParameter(format!("agent index {agent_index}")));
    }
    let agent = &agents[agent_index];
    let factor = agent.regularizer_factor(policies[agent_index].distortion())?;
    let dt = cfg.dt();
    let mut z = Vec::with_capacity(n_episodes);
    let mut gaps = Vec::with_capacity(n_episodes);
    let mut regs = Vec::with_capacity(n_episodes);
    for _ in 0..n_episodes {
        let traj = simulate_game(params, policies, cfg, rng)?;
        let reg: f64 = (0..traj.n_steps())
            .map(|k| agent.lambda.at(traj.times[k], cfg.horizon) * traj.stds[agent_index][k] * factor * dt)
            .sum();
        let n = traj.n_steps();
        let gap = traj.wealth(agent_index)[n] - agent.k * traj.wealth(1 - agent_index)[n];
        z.push(reg + gap);
        gaps.push(gap);
        regs.push(reg);
    }
    let nf = n_episodes as f64;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / nf;
    let gap_mean = mean(&gaps);
    let gap_var = gaps.iter().map(|g| (g - gap_mean).powi(2)).sum::<f64>() / (nf - 1.0);
    let value = mean(&z) - 0.5 * agent.gamma * gap_var;
    let influence: Vec<f64> = z
        .iter()
        .zip(&gaps)
        .map(|(zi, gi)| zi - 0.5 * agent.gamma * (gi - gap_mean).powi(2))
        .collect();
    let inf_mean = mean(&influence);
    let inf_var = influence.iter().map(|x| (x - inf_mean).powi(2)).sum::<f64>() / (nf - 1.0);
    Ok(ObjectiveEstimate {
        value,
        std_error: (inf_var / nf).sqrt(),
        mean_terminal_gap: gap_mean,
        var_terminal_gap: gap_var,
        mean_regularizer: mean(&regs),
        episodes: n_episodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize) -> SimConfig {
        SimConfig {
            horizon: 1.0,
            n_steps: n,
            seed: 1,
            x1_0: 1.0,
            x2_0: 0.5,
            y_0: 0.273,
        }
    }

    #[test]
    fn degenerate_state_stays_put() {
        let params = MarketParams {
            v: 0.0,
            iota: 0.0,
            ..MarketParams::table1()
        };
        let mut rng = episode_rng(3, 0);
        let path = simulate_state_and_price(&params, &cfg(50), &mut rng).unwrap();
        assert!(path.y.iter().all(|&y| y == 0.273));
    }

    #[test]
    fn zero_volatility_price_is_constant_when_state_is_zero() {
        let params = MarketParams {
            sigma: 1e-300,
            ..MarketParams::table1()
        };
        let mut rng = episode_rng(3, 0);
        let path = simulate_state_and_price(&params, &cfg(50), &mut rng).unwrap();
        assert!(path.s_disc.iter().all(|&s| (s - 1.0).abs() < 1e-12));
    }

    #[test]
    fn wealth_step_arithmetic() {
        assert_eq!(step_wealth(3.0, 0.0, 1.0, 7.0).unwrap(), 3.0);
        assert!((step_wealth(1.0, 1.0, 100.0, 101.0).unwrap() - 1.01).abs() < 1e-15);
        assert!(matches!(step_wealth(1.0, 1.0, 0.0, 1.0), Err(Error::InvalidPrice(_))));
    }

    #[test]
    fn point_mass_policies_leave_wealth_constant() {
        let a = FixedLaw::point_mass(0.0);
        let b = FixedLaw::point_mass(0.0);
        let mut rng = episode_rng(9, 2);
        let traj = simulate_game(&MarketParams::table1(), [&a, &b], &cfg(20), &mut rng).unwrap();
        assert!(traj.x1.iter().all(|&x| x == 1.0));
        assert!(traj.x2.iter().all(|&x| x == 0.5));
    }

    #[test]
    fn identical_seeds_are_bit_identical() {
        let a = FixedLaw {
            mean: 1.0,
            std: 0.3,
            distortion: Distortion::gini(),
        };
        let b = FixedLaw {
            mean: -0.5,
            std: 0.2,
            distortion: Distortion::normal(),
        };
        let run = || {
            let mut rng = episode_rng(11, 5);
            simulate_game(&MarketParams::table1(), [&a, &b], &cfg(30), &mut rng).unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn mutual_full_coupling_is_singular() {
        let law = ActionLaw {
            base: 1.0,
            coupling: 1.0,
            std: 0.0,
        };
        assert!(matches!(resolve_means(&law, &law), Err(Error::SingularSystem(_))));
    }

    #[test]
    fn parameter_validation() {
        assert!(MarketParams::table1().validate().is_ok());
        let bad = MarketParams {
            rho: -1.5,
            ..MarketParams::table1()
        };
        assert!(bad.validate().is_err());
        let bad = MarketParams {
            sigma: 0.0,
            ..MarketParams::table1()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn trajectory_csv_layout() {
        let a = FixedLaw::point_mass(1.0);
        let mut rng = episode_rng(0, 0);
        let traj = simulate_game(&MarketParams::table1(), [&a, &a], &cfg(3), &mut rng).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,y,s_disc,x1,x2,u1,u2");
        assert_eq!(lines.len(), 5);
        assert!(lines[4].ends_with(",,"));
    }
}
