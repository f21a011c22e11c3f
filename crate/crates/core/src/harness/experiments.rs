use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, MechanismSpec, StrategySpec};
use super::csv_io::{BoundSweepRow, RmseRow};
use super::interaction::RunOutcome;
use super::runner::{map_runs, mean_std, run_experiment};
use crate::adversary::StrategyKind;
use crate::bounds::{gaussian_rmse_bound, thresholdout_rmse_bound, BoundName, BoundParams};
use crate::error::{Error, Result};
use crate::mechanisms::{BudgetPolicy, ThresholdoutParams};
use crate::numeric::minimize_log;

/// Thresholdout threshold used in RMSE comparisons.
pub const RMSE_THRESHOLDOUT_T: f64 = 0.04;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RmseMechanism {
    Gaussian,
    Thresholdout,
    /// Exact empirical answers; no proven bound.
    Empirical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RmseConfig {
    pub mechanism: RmseMechanism,
    pub n: usize,
    pub ks: Vec<usize>,
    pub runs: usize,
    pub seed: u64,
}

/// One RMSE point with the mechanism parameters chosen for it.
#[derive(Debug, Clone, PartialEq)]
pub struct RmsePoint {
    pub row: RmseRow,
    /// RMSE of the adaptive query alone.
    pub adaptive_rmse: f64,
    pub tuned: BTreeMap<String, f64>,
}

fn thresholdout_for(n: usize, k: usize) -> Result<(ThresholdoutParams, usize, f64)> {
    let holdout = n / 2;
    let budget = k + 1;
    let bound = |sigma: f64| {
        let p = BoundParams::new(n, k, 0.05).with_thresholdout(sigma, RMSE_THRESHOLDOUT_T, holdout, budget);
        thresholdout_rmse_bound(&p).unwrap_or(f64::INFINITY)
    };
    let (sigma, upper) = minimize_log(bound, 1e-6, 1.0, 121, 1e-6);
    if !upper.is_finite() {
        return Err(Error::InvalidParameter(format!("no finite Thresholdout bound at n={n}, k={k}")));
    }
    let params = ThresholdoutParams {
        threshold: RMSE_THRESHOLDOUT_T,
        sigma,
        budget,
        policy: BudgetPolicy::Halt,
    };
    Ok((params, holdout, upper))
}

/// Proven and realized RMSE against the single-adaptive analyst on uniform
/// data, for each `k`.
///
/// The Gaussian mechanism's `ρ` and Thresholdout's `σ` are chosen per `k` to
/// minimize the proven bound. The proven bound controls `E[max_i e_i²]` over
/// all `k + 1` answers, so the realized statistic is the largest absolute
/// error of each run, aggregated over `runs` runs. The adaptive query's own
/// RMSE is reported alongside.
pub fn rmse_experiment(cfg: &RmseConfig) -> Result<Vec<RmsePoint>> {
    if cfg.runs < 1 || cfg.ks.is_empty() || cfg.n < 4 {
        return Err(Error::Config("RMSE sweep needs runs ≥ 1, n ≥ 4 and at least one k".into()));
    }
    cfg.ks
        .iter()
        .map(|&k| {
            let mut tuned = BTreeMap::new();
            let (mechanism, upper) = match cfg.mechanism {
                RmseMechanism::Gaussian => {
                    let b = gaussian_rmse_bound(&BoundParams::new(cfg.n, k, 0.05))?;
                    let rho = b.optimizer["rho"];
                    tuned.insert("rho".to_string(), rho);
                    (MechanismSpec::Gaussian { rho }, Some(b.tau))
                }
                RmseMechanism::Thresholdout => {
                    let (params, holdout, upper) = thresholdout_for(cfg.n, k)?;
                    tuned.insert("sigma".to_string(), params.sigma);
                    tuned.insert("threshold".to_string(), params.threshold);
                    tuned.insert("holdout".to_string(), holdout as f64);
                    tuned.insert("budget".to_string(), params.budget as f64);
                    (MechanismSpec::Thresholdout { holdout, params }, Some(upper))
                }
                RmseMechanism::Empirical => (MechanismSpec::Empirical, None),
            };
            let strategy = StrategySpec {
                kind: StrategyKind::SingleAdaptive,
                k,
                agreement_mode: true,
                clamp_eps: None,
            };
            let mut exp = ExperimentConfig::new(mechanism, strategy, cfg.n);
            exp.runs = cfg.runs;
            exp.seed = cfg.seed;
            let outcomes = run_experiment(&exp)?;
            let rms = |xs: &[f64]| (xs.iter().map(|e| e * e).sum::<f64>() / xs.len() as f64).sqrt();
            let worst: Vec<f64> = outcomes.iter().map(|o| o.max_abs_error).collect();
            Ok(RmsePoint {
                row: RmseRow {
                    k,
                    upper_bound_rmse: upper,
                    realized_rmse_mean: rms(&worst),
                    realized_rmse_std: mean_std(&worst).1,
                },
                adaptive_rmse: rms(&adaptive_errors(&outcomes)?),
                tuned,
            })
        })
        .collect()
}

fn adaptive_errors(outcomes: &[RunOutcome]) -> Result<Vec<f64>> {
    outcomes
        .iter()
        .map(|o| {
            o.adaptive_error
                .ok_or_else(|| Error::Protocol(format!("run {} never answered its adaptive query", o.run_id)))
        })
        .collect()
}

/// Mean and standard deviation of the number of queries answered before the
/// first ⊥, or the first error or width above `cfg.tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryCount {
    pub k_mean: f64,
    pub k_std: f64,
    pub runs: usize,
}

pub fn queries_answered(cfg: &ExperimentConfig) -> Result<QueryCount> {
    if cfg.tau.is_none() {
        return Err(Error::Config("counting answered queries needs a target τ".into()));
    }
    let cfg = ExperimentConfig {
        stop_at_violation: true,
        ..*cfg
    };
    let ks: Vec<f64> = run_experiment(&cfg)?.iter().map(|o| o.answered as f64).collect();
    let (k_mean, k_std) = mean_std(&ks);
    Ok(QueryCount {
        k_mean,
        k_std,
        runs: cfg.runs,
    })
}

/// Fraction of runs with at least one answered interval missing its
/// population value.
pub fn miss_rate(outcomes: &[RunOutcome]) -> f64 {
    outcomes.iter().filter(|o| !o.covered).count() as f64 / outcomes.len() as f64
}

/// About `steps` log-spaced integers from `a` to `b` inclusive, deduplicated.
pub fn log_sweep(a: usize, b: usize, steps: usize) -> Result<Vec<usize>> {
    if a < 1 || b < a || steps < 1 || (steps == 1 && a != b) {
        return Err(Error::Config(format!("bad sweep {a}:{b}:{steps}")));
    }
    if steps == 1 {
        return Ok(vec![a]);
    }
    let (la, lb) = ((a as f64).ln(), (b as f64).ln());
    let mut out: Vec<usize> = (0..steps)
        .map(|i| (la + (lb - la) * i as f64 / (steps - 1) as f64).exp().round() as usize)
        .map(|v| v.clamp(a, b))
        .collect();
    out.dedup();
    Ok(out)
}

/// Which parameter a bound sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    N,
    K,
}

/// Evaluates `bound` at each value of the swept parameter.
pub fn bound_sweep(bound: BoundName, template: &BoundParams, var: SweepVar, values: &[usize]) -> Result<Vec<BoundSweepRow>> {
    map_runs(values.len(), |i| {
        let p = match var {
            SweepVar::N => BoundParams { n: values[i], ..*template },
            SweepVar::K => BoundParams { k: values[i], ..*template },
        };
        bound.evaluate(&p).map(|w| BoundSweepRow {
            bound_name: bound.as_str().to_string(),
            n: p.n,
            k: p.k,
            beta: p.beta,
            tau: w.tau,
            optimizer: w.optimizer_string(),
        })
    })
    .into_iter()
    .collect()
}
