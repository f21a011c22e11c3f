//! Datasets, distributions, queries and interaction records.

mod answer;
mod distribution;
mod matrix;
mod query;

pub use answer::{IntervalAnswer, Transcript, TranscriptEntry};
pub use distribution::{sample_dataset, ProductDistribution};
pub use matrix::SampleMatrix;
pub use query::{eval_query, true_value, QuerySpec, TrueValue, TruthMode, MAX_EXACT_SUPPORT};
