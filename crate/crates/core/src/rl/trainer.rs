use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::actor::{ActorParams, ActorPolicy};
use super::adam::{AdamConfig, AdamState};
use super::critic::{critic_update, td_errors, CriticParams, Transition};
use crate::choquet::build_optimal_quantile;
use crate::error::{Error, Result};
use crate::market::{episode_rng, simulate_game, AgentParams, GamePolicy, MarketParams, SimConfig, Trajectory};

/// Fraction of diverged episodes tolerated before training aborts.
pub const MAX_SKIP_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    pub episodes: usize,
    pub n_steps: usize,
    pub horizon: f64,
    /// Actor (Adam) learning rate.
    pub alpha: f64,
    /// Critic learning rate; defaults to `alpha`.
    #[serde(default)]
    pub critic_alpha: Option<f64>,
    pub kappa: f64,
    #[serde(default)]
    pub adam: AdamConfig,
    pub seed: u64,
    #[serde(default = "default_degree")]
    pub critic_degree: usize,
    pub x1_0: f64,
    pub x2_0: f64,
    pub y_0: f64,
    /// Relative offset of the initial actors from the equilibrium parameters.
    #[serde(default = "default_init_offset")]
    pub init_offset: f64,
    #[serde(default)]
    pub freeze_opponent: bool,
}

fn default_degree() -> usize {
    2
}

fn default_init_offset() -> f64 {
    0.05
}

impl TrainConfig {
    /// Algorithm settings of the desk-scale experiment: `T = 1`, `N = 250`,
    /// `α = 0.001`, `κ = 0.01`.
    pub fn table2() -> Self {
        Self {
            episodes: 2000,
            n_steps: 250,
            horizon: 1.0,
            alpha: 0.001,
            critic_alpha: None,
            kappa: 0.01,
            adam: AdamConfig::default(),
            seed: 2024,
            critic_degree: 2,
            x1_0: 1.0,
            x2_0: 1.0,
            y_0: 0.273,
            init_offset: 0.05,
            freeze_opponent: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.kappa > 0.0) {
            return bad(format!("kappa must be > 0, got {}", self.kappa));
        }
        if !(self.alpha > 0.0) || self.critic_alpha.is_some_and(|a| !(a > 0.0)) {
            return bad("learning rates must be > 0".into());
        }
        if self.n_steps < 1 || !(self.horizon > 0.0) {
            return bad("training needs n_steps >= 1 and horizon > 0".into());
        }
        CriticParams::zeros(self.critic_degree)?;
        Ok(())
    }

    pub fn critic_lr(&self) -> f64 {
        self.critic_alpha.unwrap_or(self.alpha)
    }

    pub fn sim(&self) -> SimConfig {
        SimConfig {
            horizon: self.horizon,
            n_steps: self.n_steps,
            seed: self.seed,
            x1_0: self.x1_0,
            x2_0: self.x2_0,
            y_0: self.y_0,
        }
    }
}

/// Learner state of one agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentLearner {
    pub actor: ActorParams,
    pub critic: CriticParams,
    pub adam: AdamState,
}

/// Everything needed to resume training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainState {
    pub episode: usize,
    pub learners: [AgentLearner; 2],
}

impl TrainState {
    pub fn new(actors: [ActorParams; 2], critic_degree: usize, adam: AdamConfig) -> Result<Self> {
        let make = |a: ActorParams| -> Result<AgentLearner> {
            Ok(AgentLearner {
                actor: a,
                critic: CriticParams::zeros(critic_degree)?,
                adam: AdamState::new(4, adam),
            })
        };
        Ok(Self {
            episode: 0,
            learners: [make(actors[0])?, make(actors[1])?],
        })
    }

    /// Actors at `Φ*` offset by `cfg.init_offset`, zero critics.
    pub fn near_equilibrium(agents: &[AgentParams; 2], market: &MarketParams, cfg: &TrainConfig) -> Result<Self> {
        let actors = [0, 1].map(|i| ActorParams::equilibrium(&agents[i], market).perturbed(cfg.init_offset));
        Self::new(actors, cfg.critic_degree, cfg.adam)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpisodeMetrics {
    pub episode: usize,
    pub critic_loss: [f64; 2],
    pub phi: [[f64; 4]; 2],
}

#[derive(Debug, Clone)]
pub struct TrainOutput {
    pub state: TrainState,
    /// Actor parameters after each episode, preceded by the initial values.
    pub phi_history: [Vec<[f64; 4]>; 2],
    pub metrics: Vec<EpisodeMetrics>,
    pub skipped: usize,
}

/// Transitions of agent `i`'s wealth gap along an episode together with the
/// per-step regularizer weights `λ_i(t_k)Φ_{h_i}`.
pub fn nominal_transitions(
    traj: &Trajectory,
    agent_index: usize,
    agent: &AgentParams,
    actor: &ActorParams,
    horizon: f64,
) -> (Vec<Transition>, Vec<f64>) {
    let gap = traj.wealth_gap(agent_index, agent.k);
    let n = traj.n_steps();
    let trs = (0..n)
        .map(|k| Transition {
            t0: traj.times[k],
            x0: gap[k],
            y0: traj.y[k],
            t1: traj.times[k + 1],
            x1: gap[k + 1],
            y1: traj.y[k + 1],
        })
        .collect();
    let regs = (0..n)
        .map(|k| {
            let t = traj.times[k];
            agent.lambda.at(t, horizon) * actor.regularizer(agent, t, horizon)
        })
        .collect();
    (trs, regs)
}

/// One-step transitions under the perturbed actors `Φ + κz_k`, replaying the
/// episode's uniforms, market noise and opponent actions.
pub fn perturbed_transitions(
    traj: &Trajectory,
    agent_index: usize,
    agent: &AgentParams,
    actor: &ActorParams,
    z: &[[f64; 4]],
    kappa: f64,
    horizon: f64,
) -> Result<(Vec<Transition>, Vec<f64>)> {
    let (i, j) = (agent_index, 1 - agent_index);
    let gap = traj.wealth_gap(i, agent.k);
    let opp = traj.actions(j);
    let n = traj.n_steps();
    let mut trs = Vec::with_capacity(n);
    let mut regs = Vec::with_capacity(n);
    for k in 0..n {
        let mut bar = actor.phi;
        for q in 0..4 {
            bar[q] += kappa * z[k][q];
        }
        let bar = ActorParams::new(bar);
        let (t, y) = (traj.times[k], traj.y[k]);
        let mean = bar.own_mean(t, y, horizon) + agent.k * traj.means[j][k];
        let law = build_optimal_quantile(&agent.distortion, mean, bar.std(agent, t, horizon))?;
        let u_bar = law.sample(traj.uniforms[i][k])?;
        let ret = traj.price_return(k);
        trs.push(Transition {
            t0: t,
            x0: gap[k],
            y0: y,
            t1: traj.times[k + 1],
            x1: gap[k] + (u_bar - agent.k * opp[k]) * ret,
            y1: traj.y[k + 1],
        });
        regs.push(agent.lambda.at(t, horizon) * bar.regularizer(agent, t, horizon));
    }
    Ok((trs, regs))
}

/// `Σ_k (z_k/κ)(C¹_k(Φ + κz_k) − C¹_k(Φ))`.
#[allow(clippy::too_many_arguments)]
pub fn actor_gradient(
    theta: &CriticParams,
    nominal: &[Transition],
    nominal_regs: &[f64],
    perturbed: &[Transition],
    perturbed_regs: &[f64],
    z: &[[f64; 4]],
    kappa: f64,
    gamma: f64,
    horizon: f64,
) -> Result<[f64; 4]> {
    if !(kappa > 0.0) {
        return Err(Error::Config(format!("kappa must be > 0, got {kappa}")));
    }
    let mut grad = [0.0; 4];
    for k in 0..nominal.len() {
        let (c_nom, _) = td_errors(theta, &nominal[k], gamma, nominal_regs[k], horizon);
        let (c_bar, _) = td_errors(theta, &perturbed[k], gamma, perturbed_regs[k], horizon);
        let diff = (c_bar - c_nom) / kappa;
        for q in 0..4 {
            grad[q] += z[k][q] * diff;
        }
    }
    Ok(grad)
}

/// Baseline-corrected smoothed-functional estimate `z(f(Φ + κz) − f(Φ))/κ`.
pub fn smoothed_gradient<F: Fn(&[f64]) -> f64>(f: &F, phi: &[f64], z: &[f64], kappa: f64) -> Vec<f64> {
    let bar: Vec<f64> = phi.iter().zip(z).map(|(p, zi)| p + kappa * zi).collect();
    let diff = (f(&bar) - f(phi)) / kappa;
    z.iter().map(|zi| zi * diff).collect()
}

/// Smoothed-functional estimate without the baseline, `z·f(Φ + κz)/κ`.
pub fn smoothed_gradient_raw<F: Fn(&[f64]) -> f64>(f: &F, phi: &[f64], z: &[f64], kappa: f64) -> Vec<f64> {
    let bar: Vec<f64> = phi.iter().zip(z).map(|(p, zi)| p + kappa * zi).collect();
    let v = f(&bar) / kappa;
    z.iter().map(|zi| zi * v).collect()
}

fn draw_z<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<[f64; 4]> {
    (0..n)
        .map(|_| std::array::from_fn(|_| StandardNormal.sample(&mut *rng)))
        .collect()
}

/// Updates one learner from an episode: a critic step on the nominal TD
/// errors, then an Adam ascent step on the smoothed actor gradient.
pub fn update_learner<R: Rng + ?Sized>(
    learner: &mut AgentLearner,
    traj: &Trajectory,
    agent_index: usize,
    agent: &AgentParams,
    cfg: &TrainConfig,
    rng: &mut R,
) -> Result<f64> {
    let horizon = cfg.horizon;
    let z = draw_z(rng, traj.n_steps());
    let (nominal, regs) = nominal_transitions(traj, agent_index, agent, &learner.actor, horizon);
    let (critic, loss) = critic_update(&learner.critic, &nominal, &regs, agent.gamma, horizon, cfg.critic_lr());
    let (perturbed, regs_bar) = perturbed_transitions(traj, agent_index, agent, &learner.actor, &z, cfg.kappa, horizon)?;
    let grad = actor_gradient(&critic, &nominal, &regs, &perturbed, &regs_bar, &z, cfg.kappa, agent.gamma, horizon)?;
    let ascent = grad.map(|g| -g);
    let mut phi = learner.actor.phi;
    learner.adam.step(&mut phi, &ascent, cfg.alpha);
    learner.actor = ActorParams::new(phi);
    learner.critic = critic;
    Ok(loss)
}

fn finite(l: &AgentLearner) -> bool {
    l.actor.phi.iter().chain(&l.critic.theta).all(|x| x.is_finite())
}

/// Runs `cfg.episodes` episodes of simultaneous actor-critic training from
/// `state`. Episodes run on independent streams keyed by their global index,
/// so resuming from a checkpoint reproduces an uninterrupted run.
pub fn train(agents: &[AgentParams; 2], market: &MarketParams, cfg: &TrainConfig, mut state: TrainState) -> Result<TrainOutput> {
    cfg.validate()?;
    market.validate()?;
    for a in agents {
        a.validate()?;
    }
    let sim = cfg.sim();
    let mut phi_history = [vec![state.learners[0].actor.phi], vec![state.learners[1].actor.phi]];
    let mut metrics = Vec::with_capacity(cfg.episodes);
    let mut skipped = 0;
    let cap = MAX_SKIP_FRACTION * cfg.episodes as f64;
    for _ in 0..cfg.episodes {
        let m = state.episode;
        state.episode += 1;
        let mut rng = episode_rng(cfg.seed, m as u64);
        let policies: [ActorPolicy; 2] = std::array::from_fn(|i| ActorPolicy {
            params: state.learners[i].actor,
            agent: agents[i].clone(),
            horizon: cfg.horizon,
        });
        let traj = simulate_game(market, [&policies[0] as &dyn GamePolicy, &policies[1]], &sim, &mut rng);
        let traj = match traj {
            Ok(t) => t,
            Err(Error::SimulationDiverged { .. }) => {
                skipped += 1;
                if skipped as f64 > cap {
                    return Err(Error::TrainingDiverged {
                        skipped,
                        total: cfg.episodes,
                    });
                }
                continue;
            }
            Err(e) => return Err(e),
        };
        let mut loss = [f64::NAN; 2];
        for i in 0..2 {
            if cfg.freeze_opponent && i == 1 {
                continue;
            }
            loss[i] = update_learner(&mut state.learners[i], &traj, i, &agents[i], cfg, &mut rng)?;
            if !finite(&state.learners[i]) {
                return Err(Error::TrainingDiverged {
                    skipped: skipped + 1,
                    total: cfg.episodes,
                });
            }
        }
        for i in 0..2 {
            phi_history[i].push(state.learners[i].actor.phi);
        }
        metrics.push(EpisodeMetrics {
            episode: m + 1,
            critic_loss: loss,
            phi: [state.learners[0].actor.phi, state.learners[1].actor.phi],
        });
    }
    Ok(TrainOutput {
        state,
        phi_history,
        metrics,
        skipped,
    })
}

/// Trains only the critics, with both actors frozen.
pub fn train_critics(
    agents: &[AgentParams; 2],
    market: &MarketParams,
    cfg: &TrainConfig,
    actors: [ActorParams; 2],
    mut critics: [CriticParams; 2],
) -> Result<[CriticParams; 2]> {
    cfg.validate()?;
    let sim = cfg.sim();
    let policies: [ActorPolicy; 2] = std::array::from_fn(|i| ActorPolicy {
        params: actors[i],
        agent: agents[i].clone(),
        horizon: cfg.horizon,
    });
    for m in 0..cfg.episodes {
        let mut rng = episode_rng(cfg.seed, m as u64);
        let traj = simulate_game(market, [&policies[0] as &dyn GamePolicy, &policies[1]], &sim, &mut rng)?;
        for i in 0..2 {
            let (trs, regs) = nominal_transitions(&traj, i, &agents[i], &actors[i], cfg.horizon);
            critics[i] = critic_update(&critics[i], &trs, &regs, agents[i].gamma, cfg.horizon, cfg.critic_lr()).0;
        }
    }
    Ok(critics)
}
