//! Answer mechanisms: noisy empirical means, sample splitting, Thresholdout
//! and guess-and-check.

pub mod budget;
mod gnc;
mod noise;
mod split;
mod thresholdout;
pub mod tolerance;

pub use budget::{beta_budget, c_weight, transcript_count_log};
pub use gnc::{GnCOutcome, GnCState, GuessResponse, TolKind};
pub use noise::{noise_answer, NoiseKind, NoiseMechConfig};
pub use split::{sample_split_answer, split_block};
pub use thresholdout::{BudgetPolicy, ThresholdoutAnswer, ThresholdoutParams, ThresholdoutState};
pub use tolerance::{floor_to_grid, gamma_discretization, holdout_tol_chernoff, holdout_tol_mgf};
