use serde::{Deserialize, Serialize};

use crate::adversary::StrategyKind;
use crate::domain::ProductDistribution;
use crate::error::{Error, Result};
use crate::mechanisms::{ThresholdoutParams, TolKind};

/// The mechanism that supplies guesses to guess-and-check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GuessSpec {
    Empirical,
    Gaussian {
        rho: f64,
    },
    /// Thresholdout run on the guess rows, with `holdout` of them held out.
    Thresholdout {
        holdout: usize,
        params: ThresholdoutParams,
    },
}

/// Widths proposed alongside guesses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WidthSchedule {
    Fixed { tau: f64 },
    /// Starts at `initial`; after each failed check `τ ← min(growth·τ, cap)`.
    Responsive { initial: f64, growth: f64, cap: f64 },
}

impl WidthSchedule {
    pub fn initial(&self) -> f64 {
        match *self {
            WidthSchedule::Fixed { tau } => tau,
            WidthSchedule::Responsive { initial, .. } => initial,
        }
    }

    pub fn after_failure(&self, tau: f64) -> f64 {
        match *self {
            WidthSchedule::Fixed { tau } => tau,
            WidthSchedule::Responsive { growth, cap, .. } => (growth * tau).min(cap),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GncSpec {
    pub guess: GuessSpec,
    /// Rows given to the guess mechanism; the rest form the holdout.
    pub guess_rows: usize,
    pub tol: TolKind,
    pub schedule: WidthSchedule,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MechanismSpec {
    Empirical,
    Gaussian { rho: f64 },
    Laplace { eps_prime: f64 },
    Thresholdout { holdout: usize, params: ThresholdoutParams },
    GuessAndCheck(GncSpec),
}

impl MechanismSpec {
    pub fn name(&self) -> &'static str {
        match self {
            MechanismSpec::Empirical => "empirical",
            MechanismSpec::Gaussian { .. } => "gaussian",
            MechanismSpec::Laplace { .. } => "laplace",
            MechanismSpec::Thresholdout { .. } => "thresholdout",
            MechanismSpec::GuessAndCheck(_) => "gnc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionSpec {
    Uniform,
    /// Features +1 with probability 0.9, target always +1.
    LowVariance,
    Biased { feature: f64, target: f64 },
}

impl DistributionSpec {
    pub fn build(&self, d: usize) -> Result<ProductDistribution> {
        match *self {
            DistributionSpec::Uniform => ProductDistribution::uniform(d),
            DistributionSpec::LowVariance => ProductDistribution::low_variance(d),
            DistributionSpec::Biased { feature, target } => ProductDistribution::with_target(d, feature, target),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategySpec {
    pub kind: StrategyKind,
    pub k: usize,
    #[serde(default = "default_true")]
    pub agreement_mode: bool,
    /// Log-odds clamp margin; `None` means `1/(2n)`.
    #[serde(default)]
    pub clamp_eps: Option<f64>,
}

fn default_true() -> bool {
    true
}

/// Monte Carlo sample size for population values without a closed form.
pub const DEFAULT_TRUTH_SAMPLES: usize = 1_000_000;

/// Default query horizon cap.
pub const DEFAULT_HORIZON_CAP: usize = 40_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub mechanism: MechanismSpec,
    pub strategy: StrategySpec,
    pub distribution: DistributionSpec,
    pub n: usize,
    pub beta: f64,
    /// Target width. Noise mechanisms report it as their width; query counts
    /// stop at the first answer whose error or certified width exceeds it.
    pub tau: Option<f64>,
    pub runs: usize,
    pub seed: u64,
    #[serde(default = "default_truth_samples")]
    pub truth_samples: usize,
    /// End an interaction at the first error or width above `tau`.
    #[serde(default)]
    pub stop_at_violation: bool,
}

fn default_truth_samples() -> usize {
    DEFAULT_TRUTH_SAMPLES
}

impl ExperimentConfig {
    pub fn new(mechanism: MechanismSpec, strategy: StrategySpec, n: usize) -> Self {
        Self {
            mechanism,
            strategy,
            distribution: DistributionSpec::Uniform,
            n,
            beta: 0.05,
            tau: None,
            runs: 1,
            seed: 0,
            truth_samples: DEFAULT_TRUTH_SAMPLES,
            stop_at_violation: false,
        }
    }

    pub fn clamp_eps(&self) -> f64 {
        self.strategy.clamp_eps.unwrap_or(0.5 / self.n as f64)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.runs < 1 {
            return bad("runs must be at least 1".into());
        }
        if self.n < 2 {
            return bad(format!("n must be at least 2, got {}", self.n));
        }
        if self.strategy.k < 1 {
            return bad("k must be at least 1".into());
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return bad(format!("β must lie in (0, 1), got {}", self.beta));
        }
        if let Some(t) = self.tau {
            if !(t > 0.0 && t.is_finite()) {
                return bad(format!("τ must be positive, got {t}"));
            }
        }
        if let Some(e) = self.strategy.clamp_eps {
            if !(e > 0.0 && e < 0.5) {
                return bad(format!("clamp margin must lie in (0, 0.5), got {e}"));
            }
        }
        if self.truth_samples < 2 {
            return bad("truth sample size must be at least 2".into());
        }
        let check_holdout = |h: usize, rows: usize, p: &ThresholdoutParams| -> Result<()> {
            if h == 0 || h >= rows {
                return Err(Error::Config(format!("holdout size {h} must lie strictly between 0 and {rows}")));
            }
            p.validate().map_err(|e| Error::Config(e.to_string()))
        };
        let positive = |name: &str, v: f64| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        match self.mechanism {
            MechanismSpec::Empirical => {}
            MechanismSpec::Gaussian { rho } => positive("ρ", rho)?,
            MechanismSpec::Laplace { eps_prime } => positive("ε′", eps_prime)?,
            MechanismSpec::Thresholdout { holdout, params } => check_holdout(holdout, self.n, &params)?,
            MechanismSpec::GuessAndCheck(g) => {
                if g.guess_rows == 0 || g.guess_rows >= self.n {
                    return bad(format!(
                        "guess rows {} must lie strictly between 0 and n = {}",
                        g.guess_rows, self.n
                    ));
                }
                match g.guess {
                    GuessSpec::Empirical => {}
                    GuessSpec::Gaussian { rho } => positive("guess ρ", rho)?,
                    GuessSpec::Thresholdout { holdout, params } => check_holdout(holdout, g.guess_rows, &params)?,
                }
                match g.schedule {
                    WidthSchedule::Fixed { tau } => {
                        if !(tau > 0.0 && tau < 1.0) {
                            return bad(format!("guess width must lie in (0, 1), got {tau}"));
                        }
                    }
                    WidthSchedule::Responsive { initial, growth, cap } => {
                        if !(growth > 1.0 && cap > 0.0 && cap < 1.0 && initial > 0.0 && initial <= cap) {
                            return bad(format!(
                                "responsive schedule needs growth > 1 and 0 < initial ≤ cap < 1, got {initial}, {growth}, {cap}"
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
