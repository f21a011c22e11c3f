use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{eval_query, QuerySpec, SampleMatrix};
use crate::error::{ensure, Error, Result};
use crate::rng::laplace;

/// What happens when a query would need holdout use `B + 1`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetPolicy {
    /// Emit ⊥ and stop.
    #[default]
    Halt,
    /// Keep answering from the holdout and mark the run as over budget.
    ContinueAndFlag,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdoutParams {
    pub threshold: f64,
    pub sigma: f64,
    pub budget: usize,
    #[serde(default)]
    pub policy: BudgetPolicy,
}

impl ThresholdoutParams {
    pub fn validate(&self) -> Result<()> {
        ensure(self.threshold >= 0.0 && self.threshold.is_finite(), || {
            format!("threshold must be nonnegative, got {}", self.threshold)
        })?;
        ensure(self.sigma >= 0.0 && self.sigma.is_finite(), || {
            format!("σ must be nonnegative, got {}", self.sigma)
        })?;
        Ok(())
    }
}

/// One Thresholdout response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdoutAnswer {
    /// `None` is ⊥.
    pub value: Option<f64>,
    /// Whether the holdout was consulted for the output.
    pub used_holdout: bool,
}

#[derive(Debug, Clone)]
pub struct ThresholdoutState {
    train: SampleMatrix,
    holdout: SampleMatrix,
    params: ThresholdoutParams,
    t_hat: f64,
    used: usize,
    halted: bool,
    over_budget: bool,
}

impl ThresholdoutState {
    /// Starts a session; draws the initial noisy threshold `T + Lap(2σ)`.
    pub fn new<R: Rng + ?Sized>(
        train: SampleMatrix,
        holdout: SampleMatrix,
        params: ThresholdoutParams,
        rng: &mut R,
    ) -> Result<Self> {
        params.validate()?;
        ensure(train.d() == holdout.d(), || "train and holdout widths differ".into())?;
        let t_hat = params.threshold + laplace(rng, 2.0 * params.sigma);
        Ok(Self {
            train,
            holdout,
            params,
            t_hat,
            used: 0,
            halted: false,
            over_budget: false,
        })
    }

    /// Splits `x` at random into `n − h` training rows and `h` holdout rows.
    pub fn from_split<R: Rng + ?Sized, S: Rng + ?Sized>(
        x: &SampleMatrix,
        h: usize,
        params: ThresholdoutParams,
        split_rng: &mut S,
        noise_rng: &mut R,
    ) -> Result<Self> {
        let (holdout, train) = x.random_split(h, split_rng)?;
        Self::new(train, holdout, params, noise_rng)
    }

    pub fn used(&self) -> usize {
        self.used
    }

    pub fn is_halted(&self) -> bool {
        self.halted
    }

    pub fn over_budget(&self) -> bool {
        self.over_budget
    }

    pub fn params(&self) -> &ThresholdoutParams {
        &self.params
    }

    /// Answers `q`. Per query the noise stream is consumed as: the
    /// comparison noise `Lap(4σ)`; then, only when the holdout is used, the
    /// threshold refresh `Lap(2σ)` followed by the output noise `Lap(σ)`.
    pub fn answer<R: Rng + ?Sized>(&mut self, q: &QuerySpec, rng: &mut R) -> Result<ThresholdoutAnswer> {
        if self.halted {
            return Err(Error::MechanismHalted);
        }
        let a_t = eval_query(q, &self.train)?;
        let a_h = eval_query(q, &self.holdout)?;
        let sigma = self.params.sigma;
        let w = laplace(rng, 4.0 * sigma);
        if (a_h - a_t).abs() <= self.t_hat + w {
            return Ok(ThresholdoutAnswer {
                value: Some(a_t),
                used_holdout: false,
            });
        }
        if self.used >= self.params.budget {
            match self.params.policy {
                BudgetPolicy::Halt => {
                    self.halted = true;
                    return Ok(ThresholdoutAnswer {
                        value: None,
                        used_holdout: false,
                    });
                }
                BudgetPolicy::ContinueAndFlag => self.over_budget = true,
            }
        }
        self.t_hat = self.params.threshold + laplace(rng, 2.0 * sigma);
        self.used += 1;
        Ok(ThresholdoutAnswer {
            value: Some(a_h + laplace(rng, sigma)),
            used_holdout: true,
        })
    }
}
