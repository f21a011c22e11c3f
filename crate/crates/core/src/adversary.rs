//! Adaptive analysts. Nonadaptive rounds ask for the correlation of one
//! feature with the target; adaptive rounds combine the features seen so far
//! into a naive-Bayes vote weighted by the log-odds of their answers, which
//! overfits whatever sample produced those answers.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::domain::QuerySpec;
use crate::error::{ensure, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    /// `k` correlation queries, then one adaptive query at index `k + 1`.
    SingleAdaptive,
    /// `k` queries with adaptive ones at the perfect squares `4, 9, 16, …`.
    QuadraticAdaptive,
}

impl StrategyKind {
    /// Indices of adaptive queries for horizon parameter `k`.
    pub fn adaptive_set(&self, k: usize) -> BTreeSet<usize> {
        match self {
            StrategyKind::SingleAdaptive => BTreeSet::from([k + 1]),
            StrategyKind::QuadraticAdaptive => (2..).map(|l: usize| l * l).take_while(|&i| i <= k).collect(),
        }
    }

    /// Total number of queries issued for parameter `k`.
    pub fn horizon(&self, k: usize) -> usize {
        match self {
            StrategyKind::SingleAdaptive => k + 1,
            StrategyKind::QuadraticAdaptive => k,
        }
    }
}

#[derive(Debug, Clone)]
pub struct StrategyState {
    k: usize,
    horizon: usize,
    adaptive: BTreeSet<usize>,
    answers: BTreeMap<usize, f64>,
    next: usize,
    pending: Option<usize>,
    clamp_eps: f64,
    agreement_mode: bool,
    halted: bool,
}

impl StrategyState {
    /// `clamp_eps` bounds the answers fed to the log-odds away from 0 and 1.
    /// With `agreement_mode` the adaptive query scores agreement of the vote
    /// with the target `x(k+1)`; without it the vote alone is averaged.
    pub fn new(kind: StrategyKind, k: usize, clamp_eps: f64, agreement_mode: bool) -> Result<Self> {
        ensure(k >= 1, || "strategy needs k ≥ 1".into())?;
        ensure(clamp_eps > 0.0 && clamp_eps < 0.5, || {
            format!("clamp margin must lie in (0, 0.5), got {clamp_eps}")
        })?;
        Ok(Self {
            k,
            horizon: kind.horizon(k),
            adaptive: kind.adaptive_set(k),
            answers: BTreeMap::new(),
            next: 1,
            pending: None,
            clamp_eps,
            agreement_mode,
            halted: false,
        })
    }

    /// Number of columns the data must have: `k` features and the target.
    pub fn d(&self) -> usize {
        self.k + 1
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn is_adaptive(&self, j: usize) -> bool {
        self.adaptive.contains(&j)
    }

    pub fn is_halted(&self) -> bool {
        self.halted
    }

    /// Index of the query that awaits an answer, if any.
    pub fn pending(&self) -> Option<usize> {
        self.pending
    }

    /// The next query, or `None` once the horizon is reached or a ⊥ was
    /// received.
    pub fn next_query(&mut self) -> Result<Option<QuerySpec>> {
        if let Some(j) = self.pending {
            return Err(Error::Protocol(format!("query {j} has not been answered yet")));
        }
        if self.halted || self.next > self.horizon {
            return Ok(None);
        }
        let j = self.next;
        self.pending = Some(j);
        if !self.adaptive.contains(&j) {
            return Ok(Some(QuerySpec::correlation(j)));
        }
        let weights = self
            .answers
            .range(..j)
            .filter(|(i, _)| !self.adaptive.contains(i))
            .map(|(&i, &a)| {
                let a = a.clamp(self.clamp_eps, 1.0 - self.clamp_eps);
                (i, (a / (1.0 - a)).ln())
            })
            .collect();
        Ok(Some(QuerySpec::sign_agreement(weights, self.agreement_mode)))
    }

    /// Records the answer to the pending query; `None` is ⊥ and halts.
    pub fn record_answer(&mut self, answer: Option<f64>) -> Result<()> {
        let j = self
            .pending
            .take()
            .ok_or_else(|| Error::Protocol("answer received with no query pending".into()))?;
        match answer {
            Some(a) => {
                self.answers.insert(j, a);
                self.next = j + 1;
            }
            None => self.halted = true,
        }
        Ok(())
    }
}
