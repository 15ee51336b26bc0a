use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use choquet_nash::equilibrium::{equilibrium_pair, solve_coefficients, value_functions};
use choquet_nash::grid::TimeGrid;
use choquet_nash::market::{episode_rng, estimate_objective, resolve_means, simulate_game, ActionLaw, GamePolicy};
use choquet_nash::policy_iter::{run_response_iteration, simultaneous_mean_iteration, write_history_csv, ResponseInit};
use choquet_nash::rl::{train, ActorParams, Checkpoint, TrainConfig, TrainOutput, TrainState};
use choquet_nash::{AgentParams, Error};
use rayon::prelude::*;

use crate::config::{ConfigError, ExperimentConfig};

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Config(String),
    #[error("certificate failed: {0}")]
    Certificate(String),
    #[error("{0}")]
    Diverged(String),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Certificate(_) => 3,
            Failure::Diverged(_) => 4,
            Failure::Other(_) => 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::InvalidParameter(_) | Error::SingularSystem(_) => Failure::Config(e.to_string()),
            Error::TrainingDiverged { .. } => Failure::Diverged(e.to_string()),
            other => Failure::Other(other.into()),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Other(e.into())
    }
}

type Outcome = Result<Vec<PathBuf>, Failure>;

fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>), Failure> {
    fs::create_dir_all(dir).map_err(|e| anyhow::anyhow!("cannot create {}: {e}", dir.display()))?;
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
    Ok((path, BufWriter::new(file)))
}

fn write_densities(
    w: &mut impl Write,
    param: &str,
    value: f64,
    agent: usize,
    agents: &[AgentParams; 2],
    cfg: &ExperimentConfig,
    t: f64,
) -> Result<(), Failure> {
    let coeffs = solve_coefficients(agents, &cfg.market, cfg.sim.horizon, cfg.equilibrium.grid_size)?;
    let pols = equilibrium_pair(agents, &cfg.market, &coeffs)?;
    for (u, d) in pols[agent].density_grid(t, cfg.equilibrium.y, cfg.equilibrium.density_points)? {
        writeln!(w, "{param},{value},{u},{d}")?;
    }
    Ok(())
}

/// Coefficient tables and equilibrium density sweeps.
pub fn cmd_equilibrium(cfg: &ExperimentConfig) -> Outcome {
    let dir = &cfg.output_dir;
    let agents = cfg.agent_params();
    let eq = &cfg.equilibrium;
    let coeffs = solve_coefficients(&agents, &cfg.market, cfg.sim.horizon, eq.grid_size)?;
    let mut files = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        let (path, mut w) = create(dir, &format!("coefficients_agent{}.csv", i + 1))?;
        c.write_csv(&mut w)?;
        w.flush()?;
        files.push(path);
    }
    type Setter = fn(&mut [AgentParams; 2], f64);
    let sweeps: [(&str, &[f64], Setter); 4] = [
        ("k1", &eq.k1, |a, v| a[0].k = v),
        ("gamma1", &eq.gamma1, |a, v| a[0].gamma = v),
        ("k2", &eq.k2, |a, v| a[1].k = v),
        ("gamma2", &eq.gamma2, |a, v| a[1].gamma = v),
    ];
    for i in 0..2 {
        let (path, mut w) = create(dir, &format!("densities_agent{}_time.csv", i + 1))?;
        writeln!(w, "param,value,u,density")?;
        for &t in &eq.times {
            write_densities(&mut w, "t", t, i, &agents, cfg, t)?;
        }
        w.flush()?;
        files.push(path);
        for &t in &eq.times {
            let (path, mut w) = create(dir, &format!("densities_agent{}_t{t}.csv", i + 1))?;
            writeln!(w, "param,value,u,density")?;
            for (name, values, set) in sweeps {
                for &v in values {
                    let mut a = agents.clone();
                    set(&mut a, v);
                    write_densities(&mut w, name, v, i, &a, cfg, t)?;
                }
            }
            w.flush()?;
            files.push(path);
        }
    }
    Ok(files)
}

/// Response and simultaneous iterations with their error envelopes.
pub fn cmd_iterate(cfg: &ExperimentConfig) -> Outcome {
    let it = &cfg.iterate;
    let horizon = cfg.sim.horizon;
    let agents = cfg.agent_params();
    let grid = TimeGrid::new(horizon, it.grid_size)?;
    let coeffs = solve_coefficients(&agents, &cfg.market, horizon, it.grid_size)?;
    let means = simultaneous_mean_iteration(&agents, &cfg.market, &coeffs, &it.y_slice, &|_, _, _| 0.0, it.mean_steps)?;
    let mut files = Vec::new();
    let mut failures = Vec::new();
    if !means.certified() {
        failures.push(format!("mean iteration exceeds its geometric envelope (rate {})", means.rate));
    }
    for (i, agent) in agents.iter().enumerate() {
        let init = ResponseInit::zero(grid, it.theta0);
        let h = run_response_iteration(agent, &cfg.market, horizon, it.grid_size, init, it.max_iterations, it.tol)?;
        let (path, mut w) = create(&cfg.output_dir, &format!("history_agent{}.csv", i + 1))?;
        write_history_csv(&mut w, Some(&h), Some(&means))?;
        w.flush()?;
        files.push(path);
        eprintln!(
            "agent {}: {} response iterations, final error {:.3e}, converged {}",
            i + 1,
            h.iterations(),
            h.last().sup_error(),
            h.converged
        );
        if let Some(n) = h.first_violation() {
            failures.push(format!("agent {} exceeds the factorial envelope at n = {n}", i + 1));
        }
        if !h.converged {
            failures.push(format!("agent {} did not reach tol {} in {} iterations", i + 1, it.tol, it.max_iterations));
        }
    }
    if failures.is_empty() {
        Ok(files)
    } else {
        Err(Failure::Certificate(failures.join("; ")))
    }
}

fn write_metrics(w: &mut impl Write, out: &TrainOutput) -> std::io::Result<()> {
    writeln!(w, "episode,loss_critic1,loss_critic2,phi0_1,phi1_1,phi2_1,phi3_1,phi0_2,phi1_2,phi2_2,phi3_2")?;
    for m in &out.metrics {
        write!(w, "{},{},{}", m.episode, m.critic_loss[0], m.critic_loss[1])?;
        for p in m.phi.iter().flatten() {
            write!(w, ",{p}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

fn learned_means(actors: &[ActorParams; 2], agents: &[AgentParams; 2], t: f64, y: f64, horizon: f64) -> Result<[f64; 2], Error> {
    let law = |i: usize| ActionLaw {
        base: actors[i].own_mean(t, y, horizon),
        coupling: agents[i].k,
        std: 0.0,
    };
    resolve_means(&law(0), &law(1))
}

/// Actor-critic training over independent replications.
pub fn cmd_train(cfg: &ExperimentConfig) -> Outcome {
    let agents = cfg.agent_params();
    let tc = cfg.train;
    let runs: Vec<Result<TrainOutput, Error>> = (0..cfg.replications as u64)
        .into_par_iter()
        .map(|r| {
            let run_cfg = TrainConfig {
                seed: tc.seed.wrapping_add(r),
                ..tc
            };
            let state = TrainState::near_equilibrium(&agents, &cfg.market, &run_cfg)?;
            train(&agents, &cfg.market, &run_cfg, state)
        })
        .collect();
    let runs = runs.into_iter().collect::<Result<Vec<_>, _>>()?;
    let dir = &cfg.output_dir;
    let mut files = Vec::new();
    for (r, out) in runs.iter().enumerate() {
        if out.skipped > 0 {
            eprintln!("replication {r}: skipped {} diverged episodes", out.skipped);
        }
        let (path, mut w) = create(dir, &format!("metrics_rep{r}.csv"))?;
        write_metrics(&mut w, out)?;
        w.flush()?;
        files.push(path);
        let path = dir.join(format!("checkpoint_rep{r}.toml"));
        Checkpoint::new(out.state.clone()).save(&path)?;
        files.push(path);
    }

    let n = runs.len() as f64;
    let len = runs.iter().map(|o| o.phi_history[0].len()).min().unwrap_or(0);
    let mut avg = vec![[[0.0; 4]; 2]; len];
    for out in &runs {
        for (e, slot) in avg.iter_mut().enumerate() {
            for i in 0..2 {
                for q in 0..4 {
                    slot[i][q] += out.phi_history[i][e][q] / n;
                }
            }
        }
    }
    let (path, mut w) = create(dir, "phi_history.csv")?;
    writeln!(w, "episode,phi0_1,phi1_1,phi2_1,phi3_1,phi0_2,phi1_2,phi2_2,phi3_2")?;
    for (e, p) in avg.iter().enumerate() {
        write!(w, "{e}")?;
        for v in p.iter().flatten() {
            write!(w, ",{v}")?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    files.push(path);

    let horizon = tc.horizon;
    let coeffs = solve_coefficients(&agents, &cfg.market, horizon, cfg.simulate.grid_size)?;
    let pols = equilibrium_pair(&agents, &cfg.market, &coeffs)?;
    let y = cfg.market.y_bar;
    let learned = (tc.episodes > 0).then(|| avg.last().map(|p| [ActorParams::new(p[0]), ActorParams::new(p[1])])).flatten();
    let (path, mut w) = create(dir, "learned_vs_true.csv")?;
    writeln!(w, "t,mu_true_1,mu_learned_1,mu_true_2,mu_learned_2")?;
    let mut worst: f64 = 0.0;
    for k in 0..=tc.n_steps {
        let t = if k == tc.n_steps { horizon } else { horizon * k as f64 / tc.n_steps as f64 };
        let truth = pols[0].joint_means(t, y);
        match &learned {
            Some(actors) => {
                let mu = learned_means(actors, &agents, t, y, horizon)?;
                for i in 0..2 {
                    worst = worst.max(((mu[i] - truth[i]) / truth[i]).abs());
                }
                writeln!(w, "{t},{},{},{},{}", truth[0], mu[0], truth[1], mu[1])?;
            }
            None => writeln!(w, "{t},{},,{},", truth[0], truth[1])?,
        }
    }
    w.flush()?;
    files.push(path);
    if learned.is_some() {
        eprintln!("worst relative error of learned mean curves: {:.2}% (band {:.2}%)", 100.0 * worst, 100.0 * cfg.band);
        if worst > cfg.band {
            return Err(Failure::Certificate(format!(
                "learned mean curves leave the {:.0}% band (worst {:.1}%)",
                100.0 * cfg.band,
                100.0 * worst
            )));
        }
    }
    Ok(files)
}

/// One equilibrium trajectory and Monte Carlo objective estimates.
pub fn cmd_simulate(cfg: &ExperimentConfig) -> Outcome {
    let agents = cfg.agent_params();
    let sim = &cfg.sim;
    let coeffs = solve_coefficients(&agents, &cfg.market, sim.horizon, cfg.simulate.grid_size)?;
    let pols = equilibrium_pair(&agents, &cfg.market, &coeffs)?;
    let refs: [&dyn GamePolicy; 2] = [&pols[0], &pols[1]];
    let mut files = Vec::new();
    let traj = simulate_game(&cfg.market, refs, sim, &mut episode_rng(sim.seed, 0))?;
    let (path, mut w) = create(&cfg.output_dir, "trajectory.csv")?;
    traj.write_csv(&mut w)?;
    w.flush()?;
    files.push(path);

    let (path, mut w) = create(&cfg.output_dir, "objective.csv")?;
    writeln!(w, "agent,estimate,std_error,closed_form,z")?;
    let x0 = [sim.x1_0, sim.x2_0];
    for i in 0..2 {
        let mut rng = episode_rng(sim.seed, 1 + i as u64);
        let est = estimate_objective(i, &agents, refs, &cfg.market, sim, cfg.simulate.episodes, &mut rng)?;
        let x_hat = x0[i] - agents[i].k * x0[1 - i];
        let (v, _) = value_functions(i, 0.0, x_hat, sim.y_0, &coeffs);
        let z = (est.value - v) / est.std_error;
        writeln!(w, "{},{},{},{v},{z}", i + 1, est.value, est.std_error)?;
        eprintln!("agent {}: objective {:.6} ± {:.2e}, closed form {v:.6} (z = {z:+.2})", i + 1, est.value, est.std_error);
    }
    w.flush()?;
    files.push(path);
    Ok(files)
}
