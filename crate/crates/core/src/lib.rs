//! Maximal reach-avoid probabilities for finite-horizon semi-Markov decision
//! processes whose obstacle set changes with the decision epoch.
//!
//! The epoch-indexed obstacles are made stationary by counting jumps
//! ([`augment`]); the maximal probability of reaching the target by the
//! horizon without landing in the current obstacle set is then computed by a
//! backward sweep over the jump count ([`solve`]) and cross-checked by Monte
//! Carlo ([`simulate`]).

// `!(x >= 0.0)` style guards deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod augment;
pub mod fixtures;
pub mod generate;
pub mod io;
pub mod model;
pub mod simulate;
pub mod solve;

pub use augment::{
    build_augmented, first_action_filler, lift_policy, project_policy, AugmentError,
    AugmentedModel, Decision, MarkovPolicy, StationaryAugmentedPolicy,
};
pub use io::{load_model, ExponentialRate, LoadError, ModelFile};
pub use model::{
    find_separation, kernel_mass, validate_model, ActionId, KernelRow, Model, ModelError,
    ObstacleSchedule, Separation, SeparationConstants, SojournDistribution, StateId, StateSet,
    TransitionLaw, ValidationReport, Violation,
};
pub use simulate::{estimate_reach_avoid, run_episode, sample_jump, EpisodeOutcome, Estimate};
pub use solve::{
    bellman_apply, convergence_params, extract_policy, monotonicity_check, solve_improved,
    value_iterate, Discretization, SolveError, SolveResult, StopRule, TimeGrid, ValueLayer,
};
