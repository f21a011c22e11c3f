use serde::{Deserialize, Serialize};

use super::query::QuerySpec;

/// A point estimate with a claimed half-width. `point == None` is the halt
/// sentinel ⊥.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalAnswer {
    pub point: Option<f64>,
    pub width: f64,
    /// Set when the answer came from a holdout fallback rather than a guess.
    pub failed: bool,
}

impl IntervalAnswer {
    pub fn new(point: f64, width: f64) -> Self {
        Self {
            point: Some(point),
            width,
            failed: false,
        }
    }

    pub fn halt() -> Self {
        Self {
            point: None,
            width: 0.0,
            failed: false,
        }
    }

    pub fn is_halt(&self) -> bool {
        self.point.is_none()
    }

    /// Whether `truth` lies in the open interval `(point − width, point + width)`.
    pub fn covers(&self, truth: f64) -> bool {
        self.point.is_some_and(|a| (a - truth).abs() < self.width)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub query: QuerySpec,
    pub answer: IntervalAnswer,
    pub truth: f64,
    /// `|point − truth|`, absent for ⊥.
    pub abs_error: Option<f64>,
    /// Confidence share spent on this query, when the mechanism tracks one.
    pub beta_i: Option<f64>,
}

/// The record of one analyst–mechanism interaction.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub entries: Vec<TranscriptEntry>,
    /// True once ⊥ has been emitted.
    pub terminated: bool,
}

impl Transcript {
    pub fn push(&mut self, query: QuerySpec, answer: IntervalAnswer, truth: f64, beta_i: Option<f64>) {
        let abs_error = answer.point.map(|a| (a - truth).abs());
        if answer.is_halt() {
            self.terminated = true;
        }
        self.entries.push(TranscriptEntry {
            query,
            answer,
            truth,
            abs_error,
            beta_i,
        });
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest absolute error over non-⊥ answers.
    pub fn max_abs_error(&self) -> f64 {
        self.entries.iter().filter_map(|e| e.abs_error).fold(0.0, f64::max)
    }

    /// True when every non-⊥ answer covers its truth.
    pub fn all_covered(&self) -> bool {
        self.entries.iter().all(|e| e.answer.is_halt() || e.answer.covers(e.truth))
    }
}
