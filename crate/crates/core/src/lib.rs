//! Mechanisms for answering adaptively chosen statistical queries with
//! confidence intervals, worst-case width solvers, adaptive analysts, and a
//! reproducible simulation harness.

pub mod adversary;
pub mod bounds;
pub mod domain;
pub mod error;
pub mod harness;
pub mod mechanisms;
pub mod numeric;
pub mod rng;

pub use domain::{
    eval_query, sample_dataset, true_value, IntervalAnswer, ProductDistribution, QuerySpec, SampleMatrix,
    Transcript, TruthMode,
};
pub use error::{Error, Result};
