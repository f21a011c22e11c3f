//! Worst-case confidence widths and RMSE bounds for the answer mechanisms,
//! with the composition formulas and solvers they rest on.

mod baselines;
mod bnsssu;
mod composition;
mod dfhprr;
mod gaussian;
mod invert;
mod lambda;
mod laplace_max;
mod thresholdout;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use baselines::{discretization_width, discretization_width_at, sample_split_width};
pub use bnsssu::bnsssu_width;
pub use composition::{advanced_composition, zcdp_to_dp};
pub use dfhprr::dfhprr_width;
pub use gaussian::{
    gaussian_rmse_bound, gaussian_tail_width, gaussian_width_rzcw, laplace_tail_width, max_gaussian_square_mean,
    xr17_width,
};
pub use invert::{max_k, BoundName};
pub use lambda::min_lambda_objective;
pub use laplace_max::laplace_max_moments;
pub use thresholdout::{thresholdout_rmse_bound, thresholdout_width};

/// Noise family for the bounds that exist in both flavours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseFamily {
    Laplace,
    Gaussian,
}

/// Scalars entering the width formulas. Optional parameters left unset are
/// optimized over by the solvers that accept them as free.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub n: usize,
    pub k: usize,
    pub beta: f64,
    pub rho: Option<f64>,
    pub eps_prime: Option<f64>,
    pub delta: Option<f64>,
    pub sigma: Option<f64>,
    pub threshold: Option<f64>,
    pub holdout: Option<usize>,
    pub budget: Option<usize>,
}

impl BoundParams {
    pub fn new(n: usize, k: usize, beta: f64) -> Self {
        Self {
            n,
            k,
            beta,
            rho: None,
            eps_prime: None,
            delta: None,
            sigma: None,
            threshold: None,
            holdout: None,
            budget: None,
        }
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = Some(rho);
        self
    }

    pub fn with_eps_prime(mut self, eps_prime: f64) -> Self {
        self.eps_prime = Some(eps_prime);
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = Some(delta);
        self
    }

    /// Thresholdout parameters: noise scale, threshold, holdout size and
    /// holdout budget.
    pub fn with_thresholdout(mut self, sigma: f64, threshold: f64, holdout: usize, budget: usize) -> Self {
        self.sigma = Some(sigma);
        self.threshold = Some(threshold);
        self.holdout = Some(holdout);
        self.budget = Some(budget);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n < 1 || self.k < 1 {
            return bad(format!("n and k must be at least 1, got n = {}, k = {}", self.n, self.k));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return bad(format!("β must lie in (0, 1), got {}", self.beta));
        }
        for (name, v) in [("ρ", self.rho), ("ε′", self.eps_prime), ("σ", self.sigma)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return bad(format!("{name} must be positive, got {v}"));
                }
            }
        }
        if let Some(d) = self.delta {
            if !(d > 0.0 && d < 1.0) {
                return bad(format!("δ must lie in (0, 1), got {d}"));
            }
        }
        if let Some(t) = self.threshold {
            if !(t >= 0.0 && t.is_finite()) {
                return bad(format!("threshold must be nonnegative, got {t}"));
            }
        }
        if self.holdout == Some(0) || self.budget == Some(0) {
            return bad("holdout size and budget must be at least 1".into());
        }
        Ok(())
    }

    pub(crate) fn nf(&self) -> f64 {
        self.n as f64
    }

    pub(crate) fn kf(&self) -> f64 {
        self.k as f64
    }
}

/// A width (or RMSE) together with the free parameters that achieved it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthResult {
    pub tau: f64,
    pub optimizer: BTreeMap<String, f64>,
    /// Set when the program has no feasible point and `tau` is `+∞`.
    pub vacuous: bool,
    /// Objective values sampled by a one-dimensional search, as
    /// `(parameter, value)` pairs.
    pub objective_trace: Vec<(f64, f64)>,
}

impl WidthResult {
    pub(crate) fn new(tau: f64) -> Self {
        Self {
            tau,
            optimizer: BTreeMap::new(),
            vacuous: !tau.is_finite(),
            objective_trace: Vec::new(),
        }
    }

    pub(crate) fn with(mut self, name: &str, value: f64) -> Self {
        self.optimizer.insert(name.to_string(), value);
        self
    }

    /// Optimizer entries rendered as `name=value;…` for CSV output.
    pub fn optimizer_string(&self) -> String {
        self.optimizer
            .iter()
            .map(|(k, v)| format!("{k}={v:.10e}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}
