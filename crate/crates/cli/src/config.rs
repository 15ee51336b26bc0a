use std::path::{Path, PathBuf};

use choquet_nash::rl::TrainConfig;
use choquet_nash::{AgentParams, DistortionPreset, LambdaSchedule, MarketParams, SimConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentConfig {
    pub gamma: f64,
    pub k: f64,
    pub distortion: DistortionPreset,
    pub lambda: LambdaSchedule,
}

impl AgentConfig {
    pub fn params(&self) -> AgentParams {
        AgentParams {
            gamma: self.gamma,
            k: self.k,
            lambda: self.lambda,
            distortion: self.distortion.build(),
        }
    }
}

/// Parameter sweeps for the equilibrium density figures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquilibriumConfig {
    pub grid_size: usize,
    /// Market state at which densities are drawn.
    pub y: f64,
    pub times: Vec<f64>,
    pub density_points: usize,
    pub k1: Vec<f64>,
    pub gamma1: Vec<f64>,
    pub k2: Vec<f64>,
    pub gamma2: Vec<f64>,
}

impl Default for EquilibriumConfig {
    fn default() -> Self {
        Self {
            grid_size: 4001,
            y: 0.273,
            times: vec![0.1, 18.0],
            density_points: 401,
            k1: vec![0.1, 0.2, 0.3, 0.4],
            gamma1: vec![1.0, 2.0, 3.0, 4.0],
            k2: vec![0.05, 0.15, 0.25, 0.35],
            gamma2: vec![0.5, 1.0, 1.5, 2.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IterateConfig {
    pub grid_size: usize,
    pub max_iterations: usize,
    pub tol: f64,
    /// Scale of the initial exploration law.
    pub theta0: f64,
    pub mean_steps: usize,
    pub y_slice: Vec<f64>,
}

impl Default for IterateConfig {
    fn default() -> Self {
        Self {
            grid_size: 4001,
            max_iterations: 25,
            tol: 1e-6,
            theta0: 1.0,
            mean_steps: 8,
            y_slice: vec![-0.5, 0.0, 0.273, 1.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub episodes: usize,
    pub grid_size: usize,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            episodes: 10_000,
            grid_size: 4001,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub output_dir: PathBuf,
    pub market: MarketParams,
    pub agents: [AgentConfig; 2],
    pub sim: SimConfig,
    pub train: TrainConfig,
    #[serde(default = "default_replications")]
    pub replications: usize,
    /// Relative band the learned mean curves must stay in.
    #[serde(default = "default_band")]
    pub band: f64,
    #[serde(default)]
    pub equilibrium: EquilibriumConfig,
    #[serde(default)]
    pub iterate: IterateConfig,
    #[serde(default)]
    pub simulate: SimulateConfig,
}

fn default_replications() -> usize {
    10
}

fn default_band() -> f64 {
    0.1
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn agent_params(&self) -> [AgentParams; 2] {
        [self.agents[0].params(), self.agents[1].params()]
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |e: choquet_nash::Error| ConfigError::Invalid(e.to_string());
        self.market.validate().map_err(invalid)?;
        for a in self.agent_params() {
            a.validate().map_err(invalid)?;
        }
        self.sim.validate().map_err(invalid)?;
        self.train.validate().map_err(invalid)?;
        let bad = |m: &str| Err(ConfigError::Invalid(m.into()));
        if self.agents[0].k * self.agents[1].k >= 1.0 {
            return bad("k1 * k2 must be < 1");
        }
        if self.replications == 0 {
            return bad("replications must be >= 1");
        }
        if !(self.band > 0.0) {
            return bad("band must be > 0");
        }
        if self.equilibrium.grid_size < 2 || self.iterate.grid_size < 2 || self.simulate.grid_size < 2 {
            return bad("grid sizes must be >= 2");
        }
        if self.equilibrium.density_points < 2 {
            return bad("density_points must be >= 2");
        }
        if self.equilibrium.times.iter().any(|&t| !(0.0..=self.sim.horizon).contains(&t)) {
            return bad("equilibrium times must lie in [0, sim.horizon]");
        }
        if self.simulate.episodes < 2 {
            return bad("simulate.episodes must be >= 2");
        }
        Ok(())
    }

    /// Settings of the equilibrium experiments, `T = 20`.
    pub fn table1() -> Self {
        let lambda = LambdaSchedule::Exponential { lambda0: 0.01 };
        Self {
            output_dir: PathBuf::from("out/table1"),
            market: MarketParams::table1(),
            agents: [
                AgentConfig {
                    gamma: 2.0,
                    k: 0.1,
                    distortion: DistortionPreset::Normal,
                    lambda,
                },
                AgentConfig {
                    gamma: 1.0,
                    k: 0.05,
                    distortion: DistortionPreset::Gini,
                    lambda,
                },
            ],
            sim: SimConfig {
                horizon: 20.0,
                n_steps: 250,
                seed: 2024,
                x1_0: 1.0,
                x2_0: 1.0,
                y_0: 0.273,
            },
            train: TrainConfig {
                horizon: 20.0,
                ..TrainConfig::table2()
            },
            replications: default_replications(),
            band: default_band(),
            equilibrium: EquilibriumConfig::default(),
            iterate: IterateConfig::default(),
            simulate: SimulateConfig::default(),
        }
    }

    /// Settings of the learning experiment at desk scale.
    pub fn table2() -> Self {
        let base = Self::table1();
        Self {
            output_dir: PathBuf::from("out/table2"),
            agents: [
                AgentConfig {
                    gamma: 2.0,
                    k: 0.1,
                    distortion: DistortionPreset::Normal,
                    lambda: LambdaSchedule::Constant { value: 0.015 },
                },
                AgentConfig {
                    gamma: 3.0,
                    k: 0.05,
                    distortion: DistortionPreset::Gini,
                    lambda: LambdaSchedule::Constant { value: 0.02 },
                },
            ],
            sim: SimConfig {
                horizon: 1.0,
                ..base.sim
            },
            train: TrainConfig::table2(),
            equilibrium: EquilibriumConfig {
                times: vec![0.1, 0.9],
                ..EquilibriumConfig::default()
            },
            ..base
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_roundtrip() {
        for cfg in [ExperimentConfig::table1(), ExperimentConfig::table2()] {
            let text = cfg.to_toml();
            let back = ExperimentConfig::from_toml(&text).unwrap();
            assert_eq!(back, cfg);
            assert_eq!(back.to_toml(), text);
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = ExperimentConfig::table1().to_toml().replace("[market]\n", "[market]\nfoo = 1.0\n");
        assert!(matches!(ExperimentConfig::from_toml(&text), Err(ConfigError::Parse(_))));
    }

    #[test]
    fn invariants_are_checked() {
        let mut cfg = ExperimentConfig::table1();
        cfg.agents[0].k = 1.5;
        assert!(matches!(ExperimentConfig::from_toml(&cfg.to_toml()), Err(ConfigError::Invalid(_))));
    }
}
