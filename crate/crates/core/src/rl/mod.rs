//! Model-free learning of the equilibrium with an actor-critic scheme.
//!
//! The actor is the four-parameter family
//! `k_iμ_j + φ₀y − φ₁(1−e^{−2φ₂τ})/φ₂·y − φ₃(1−e^{−φ₂τ})²/φ₂² + λφ₀²γ·h′(1−p)`
//! and the critic holds `V` and `g` as quadratics in `y` with polynomial
//! coefficients in the time-to-go `τ = T − t`. Each episode the critic takes
//! a gradient step on its squared TD errors and the actor an Adam step on a
//! smoothed-functional gradient computed from a perturbed replay that
//! shares the episode's uniforms and market noise.

mod actor;
mod adam;
mod checkpoint;
mod critic;
mod trainer;

pub use actor::{actor_quantile, ActorParams, ActorPolicy};
pub use adam::{adam_step, AdamConfig, AdamState};
pub use checkpoint::{Checkpoint, CHECKPOINT_FORMAT, CHECKPOINT_VERSION};
pub use critic::{critic_eval, critic_loss_and_grad, critic_update, features, td_errors, CriticParams, Transition, MAX_DEGREE};
pub use trainer::{
    actor_gradient, nominal_transitions, perturbed_transitions, smoothed_gradient, smoothed_gradient_raw, train,
    train_critics, update_learner, AgentLearner, EpisodeMetrics, TrainConfig, TrainOutput, TrainState, MAX_SKIP_FRACTION,
};
