//! Command-line front end for the equilibrium, certificate, learning and
//! simulation experiments. Every command reads a TOML experiment file and
//! writes CSV files into the output directory.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{cmd_equilibrium, cmd_iterate, cmd_simulate, cmd_train, Failure};
use config::ExperimentConfig;

#[derive(Parser)]
#[command(name = "choquet-nash", version, about = "Choquet-regularized mean-variance Nash equilibria")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficient tables and equilibrium density sweeps.
    Equilibrium(Common),
    /// Policy-iteration error histories and their bounds.
    Iterate(Common),
    /// Actor-critic training and learned-vs-true mean curves.
    Train(Common),
    /// Equilibrium trajectory and Monte Carlo objective estimates.
    Simulate(Common),
    /// Prints a built-in experiment file.
    Preset {
        #[arg(value_parser = ["table1", "table2"])]
        name: String,
    },
}

#[derive(Args)]
struct Common {
    /// Experiment file; the `table1` preset (`table2` for `train`) is
    /// used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides both the simulation and training seeds.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Trains agent 1 only, with agent 2 held at its initial actor.
    #[arg(long)]
    freeze_opponent: bool,
    #[arg(long)]
    replications: Option<usize>,
}

impl Common {
    fn resolve(&self, training: bool) -> Result<ExperimentConfig, Failure> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None if training => ExperimentConfig::table2(),
            None => ExperimentConfig::table1(),
        };
        if let Some(s) = self.seed {
            cfg.sim.seed = s;
            cfg.train.seed = s;
        }
        if let Some(o) = &self.out {
            cfg.output_dir = o.clone();
        }
        if self.freeze_opponent {
            cfg.train.freeze_opponent = true;
        }
        if let Some(r) = self.replications {
            cfg.replications = r;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, Failure> {
    match cli.command {
        Command::Equilibrium(c) => cmd_equilibrium(&c.resolve(false)?),
        Command::Iterate(c) => cmd_iterate(&c.resolve(false)?),
        Command::Train(c) => cmd_train(&c.resolve(true)?),
        Command::Simulate(c) => cmd_simulate(&c.resolve(false)?),
        Command::Preset { name } => {
            let cfg = if name == "table1" { ExperimentConfig::table1() } else { ExperimentConfig::table2() };
            print!("{}", cfg.to_toml());
            Ok(Vec::new())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
