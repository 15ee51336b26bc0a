use thiserror::Error;

/// Errors produced by the simulation, equilibrium and learning routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("simulation diverged at step {step}: {detail}")]
    SimulationDiverged { step: usize, detail: String },

    #[error("discounted price must be positive, got {0}")]
    InvalidPrice(f64),

    #[error("uniform draw {0} is outside (0, 1)")]
    Domain(f64),

    #[error("distortion is degenerate: {0}")]
    DegenerateDistortion(String),

    #[error("quadrature failed: {0}")]
    Evaluation(String),

    #[error("mean system is singular: k1 * k2 = {0} >= 1")]
    SingularSystem(f64),

    #[error("training aborted: {skipped} of {total} episodes diverged")]
    TrainingDiverged { skipped: usize, total: usize },

    #[error("checkpoint: {0}")]
    Checkpoint(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}
