//! Time-consistent Nash equilibria of a two-agent Choquet-regularized
//! exploratory mean-variance game under the Gaussian mean-return market.
//!
//! - [`market`] simulates the market and sampled-action wealth paths.
//! - [`choquet`] evaluates the Choquet regularizer and builds optimal laws.
//! - [`equilibrium`] solves the closed-form equilibrium.
//! - [`policy_iter`] runs response and simultaneous policy iteration.
//! - [`rl`] learns the equilibrium with an actor-critic scheme.

pub mod choquet;
pub mod equilibrium;
pub mod error;
pub mod grid;
pub mod market;
pub mod policy_iter;
pub mod quadrature;
pub mod rl;

pub use choquet::{build_optimal_quantile, phi_h, Distortion, DistortionPreset, QuantilePolicy};
pub use error::{Error, Result};
pub use market::{AgentParams, LambdaSchedule, MarketParams, SimConfig, Trajectory};
