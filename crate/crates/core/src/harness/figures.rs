//! Figure recipes. Each writes CSV data plus a `.meta.json` file recording the
//! mechanism parameters that were used.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde_json::{json, Value};

use super::config::{
    DistributionSpec, ExperimentConfig, GncSpec, GuessSpec, MechanismSpec, StrategySpec, WidthSchedule,
};
use super::csv_io::{write_csv, QueryCountRow};
use super::experiments::{log_sweep, queries_answered, rmse_experiment, RmseConfig, RmseMechanism};
use crate::adversary::StrategyKind;
use crate::bounds::{max_k, BoundName, BoundParams};
use crate::error::{Error, Result};
use crate::mechanisms::{BudgetPolicy, ThresholdoutParams, TolKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    IntroLeft,
    IntroRight,
    TwoRound,
    GncLowVar,
    GncBeta,
    GncGuess,
    GncResponsive,
}

impl FigureId {
    pub const ALL: [FigureId; 7] = [
        FigureId::IntroLeft,
        FigureId::IntroRight,
        FigureId::TwoRound,
        FigureId::GncLowVar,
        FigureId::GncBeta,
        FigureId::GncGuess,
        FigureId::GncResponsive,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FigureId::IntroLeft => "intro-left",
            FigureId::IntroRight => "intro-right",
            FigureId::TwoRound => "two-round",
            FigureId::GncLowVar => "gnc-lowvar",
            FigureId::GncBeta => "gnc-beta",
            FigureId::GncGuess => "gnc-guess",
            FigureId::GncResponsive => "gnc-responsive",
        }
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL.into_iter().find(|f| f.as_str() == s).ok_or_else(|| {
            let ids: Vec<_> = FigureId::ALL.iter().map(|f| f.as_str()).collect();
            Error::Config(format!("unknown figure '{s}', expected one of {}", ids.join(", ")))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    /// Minutes on a laptop.
    Desk,
    /// Long horizons and many runs. Also accepted as `paper`.
    Full,
}

impl Scale {
    fn as_str(&self) -> &'static str {
        match self {
            Scale::Desk => "desk",
            Scale::Full => "full",
        }
    }
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Scale::Desk),
            "full" | "paper" => Ok(Scale::Full),
            _ => Err(Error::Config(format!("unknown scale '{s}', expected desk or full"))),
        }
    }
}

/// Tuned guess-and-check settings shared by the recipes.
pub const GNC_GUESS_RHO: f64 = 1e-2;
pub const GNC_GUESS_FRACTION: f64 = 0.5;
const MAX_K_CAP: usize = 100_000_000;

struct Sizes {
    runs: usize,
    horizon: usize,
    truth_samples: usize,
}

impl Scale {
    fn sizes(&self) -> Sizes {
        match self {
            Scale::Desk => Sizes {
                runs: 5,
                horizon: 5_000,
                truth_samples: 20_000,
            },
            Scale::Full => Sizes {
                runs: 20,
                horizon: super::config::DEFAULT_HORIZON_CAP,
                truth_samples: 200_000,
            },
        }
    }
}

pub fn gnc_spec(n: usize, guess: GuessSpec, tol: TolKind, schedule: WidthSchedule) -> GncSpec {
    GncSpec {
        guess,
        guess_rows: ((n as f64) * GNC_GUESS_FRACTION).round() as usize,
        tol,
        schedule,
    }
}

/// A guess-and-check query-count configuration against the quadratic-adaptive
/// analyst.
pub fn gnc_count_config(n: usize, tau: f64, beta: f64, horizon: usize, spec: GncSpec) -> ExperimentConfig {
    let strategy = StrategySpec {
        kind: StrategyKind::QuadraticAdaptive,
        k: horizon,
        agreement_mode: true,
        clamp_eps: None,
    };
    let mut cfg = ExperimentConfig::new(MechanismSpec::GuessAndCheck(spec), strategy, n);
    cfg.tau = Some(tau);
    cfg.beta = beta;
    cfg.stop_at_violation = true;
    cfg
}

fn count_row(series: &str, cfg: &ExperimentConfig) -> Result<QueryCountRow> {
    let c = queries_answered(cfg)?;
    Ok(QueryCountRow {
        series: series.to_string(),
        n: cfg.n,
        beta: cfg.beta,
        tau: cfg.tau.unwrap_or(f64::NAN),
        k_mean: c.k_mean,
        k_std: c.k_std,
        runs: c.runs,
    })
}

fn bound_row(bound: BoundName, n: usize, tau: f64, beta: f64) -> Result<QueryCountRow> {
    let k = max_k(bound, &BoundParams::new(n, 1, beta), tau, MAX_K_CAP)?;
    Ok(QueryCountRow {
        series: bound.as_str().to_string(),
        n,
        beta,
        tau,
        k_mean: k as f64,
        k_std: 0.0,
        runs: 0,
    })
}

fn gaussian_guess() -> GuessSpec {
    GuessSpec::Gaussian { rho: GNC_GUESS_RHO }
}

/// Runs one recipe, writing into `out_dir`; returns the files written.
pub fn run_figure(id: FigureId, scale: Scale, seed: u64, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let sz = scale.sizes();
    let mut written = Vec::new();
    let mut write = |name: String, rows: &dyn Fn(&Path) -> Result<()>| -> Result<()> {
        let path = out_dir.join(name);
        rows(&path)?;
        written.push(path);
        Ok(())
    };
    let prep = |mut cfg: ExperimentConfig| {
        cfg.runs = sz.runs;
        cfg.seed = seed;
        cfg.truth_samples = sz.truth_samples;
        cfg
    };
    let ns = |lo: usize, hi: usize, desk: usize, full: usize| {
        log_sweep(lo, hi, if scale == Scale::Desk { desk } else { full })
    };
    let meta = match id {
        FigureId::IntroLeft => {
            let (tau, beta) = (0.1, 0.05);
            let bounds = [
                BoundName::Rzcw,
                BoundName::Xr17,
                BoundName::DfhprrLaplace,
                BoundName::DfhprrGaussian,
                BoundName::BnsssuLaplace,
                BoundName::BnsssuGaussian,
                BoundName::SampleSplit,
                BoundName::Discretization,
            ];
            let mut rows = Vec::new();
            for n in ns(1_000, 1_000_000, 7, 25)? {
                for b in bounds {
                    rows.push(bound_row(b, n, tau, beta)?);
                }
            }
            write(format!("{}.csv", id.as_str()), &|p| write_csv(p, &rows))?;
            json!({"tau": tau, "beta": beta, "k_cap": MAX_K_CAP, "series": bounds.map(|b| b.as_str())})
        }
        FigureId::IntroRight => {
            let (tau, beta) = (0.1, 0.05);
            let mut rows = Vec::new();
            let hi = if scale == Scale::Desk { 5_000 } else { 100_000 };
            for n in ns(1_000, hi, 3, 9)? {
                let spec = gnc_spec(n, gaussian_guess(), TolKind::Chernoff, WidthSchedule::Fixed { tau });
                rows.push(count_row("gnc_gaussian", &prep(gnc_count_config(n, tau, beta, sz.horizon, spec)))?);
                rows.push(bound_row(BoundName::Rzcw, n, tau, beta)?);
            }
            write(format!("{}.csv", id.as_str()), &|p| write_csv(p, &rows))?;
            json!({"tau": tau, "beta": beta, "horizon": sz.horizon, "runs": sz.runs,
                   "guess_rho": GNC_GUESS_RHO, "guess_fraction": GNC_GUESS_FRACTION, "tol": "chernoff",
                   "strategy": "quadratic_adaptive"})
        }
        FigureId::TwoRound => {
            let n = 5_000;
            let (ks, runs) = match scale {
                Scale::Desk => (log_sweep(100, 10_000, 5)?, 20),
                Scale::Full => (log_sweep(100, 50_000, 12)?, 100),
            };
            let mut tuned = serde_json::Map::new();
            for (mech, name) in [(RmseMechanism::Gaussian, "gaussian"), (RmseMechanism::Thresholdout, "thresholdout")] {
                let points = rmse_experiment(&RmseConfig {
                    mechanism: mech,
                    n,
                    ks: ks.clone(),
                    runs,
                    seed,
                })?;
                let rows: Vec<_> = points.iter().map(|p| p.row.clone()).collect();
                write(format!("{}-{name}.csv", id.as_str()), &|p| write_csv(p, &rows))?;
                let per_k: Vec<Value> = points.iter().map(|p| json!({"k": p.row.k, "params": p.tuned})).collect();
                tuned.insert(name.to_string(), Value::Array(per_k));
            }
            json!({"n": n, "runs": runs, "strategy": "single_adaptive", "tuned": tuned})
        }
        FigureId::GncLowVar => {
            let (tau, beta) = (0.05, 0.05);
            let mut rows = Vec::new();
            for n in ns(1_000, if scale == Scale::Desk { 4_000 } else { 100_000 }, 3, 9)? {
                for (tol, series) in [(TolKind::Chernoff, "gnc_chernoff"), (TolKind::Mgf, "gnc_mgf")] {
                    let spec = gnc_spec(n, gaussian_guess(), tol, WidthSchedule::Fixed { tau });
                    let mut cfg = gnc_count_config(n, tau, beta, sz.horizon, spec);
                    cfg.distribution = DistributionSpec::LowVariance;
                    rows.push(count_row(series, &prep(cfg))?);
                }
            }
            write(format!("{}.csv", id.as_str()), &|p| write_csv(p, &rows))?;
            json!({"tau": tau, "beta": beta, "distribution": "low_variance", "horizon": sz.horizon,
                   "runs": sz.runs, "guess_rho": GNC_GUESS_RHO, "guess_fraction": GNC_GUESS_FRACTION,
                   "truth_samples": sz.truth_samples})
        }
        FigureId::GncBeta => {
            let tau = 0.1;
            let mut rows = Vec::new();
            for n in ns(1_000, if scale == Scale::Desk { 5_000 } else { 100_000 }, 3, 9)? {
                for beta in [0.05, 0.005] {
                    let spec = gnc_spec(n, gaussian_guess(), TolKind::Chernoff, WidthSchedule::Fixed { tau });
                    rows.push(count_row(&format!("gnc_beta_{beta}"), &prep(gnc_count_config(n, tau, beta, sz.horizon, spec)))?);
                }
            }
            write(format!("{}.csv", id.as_str()), &|p| write_csv(p, &rows))?;
            json!({"tau": tau, "betas": [0.05, 0.005], "horizon": sz.horizon, "runs": sz.runs,
                   "guess_rho": GNC_GUESS_RHO, "guess_fraction": GNC_GUESS_FRACTION})
        }
        FigureId::GncGuess => {
            let (tau, beta) = (0.1, 0.05);
            let mut rows = Vec::new();
            for n in ns(1_000, if scale == Scale::Desk { 5_000 } else { 100_000 }, 3, 9)? {
                let n_g = ((n as f64) * GNC_GUESS_FRACTION).round() as usize;
                let guesses = [
                    ("gnc_gaussian", gaussian_guess()),
                    ("gnc_empirical", GuessSpec::Empirical),
                    (
                        "gnc_thresholdout",
                        GuessSpec::Thresholdout {
                            holdout: n_g / 2,
                            params: guess_thresholdout_params(),
                        },
                    ),
                ];
                for (series, guess) in guesses {
                    let spec = gnc_spec(n, guess, TolKind::Chernoff, WidthSchedule::Fixed { tau });
                    rows.push(count_row(series, &prep(gnc_count_config(n, tau, beta, sz.horizon, spec)))?);
                }
            }
            write(format!("{}.csv", id.as_str()), &|p| write_csv(p, &rows))?;
            let t = guess_thresholdout_params();
            json!({"tau": tau, "beta": beta, "horizon": sz.horizon, "runs": sz.runs,
                   "guess_rho": GNC_GUESS_RHO, "guess_fraction": GNC_GUESS_FRACTION,
                   "thresholdout_guess": {"holdout_fraction_of_guess_rows": 0.5, "threshold": t.threshold, "sigma": t.sigma}})
        }
        FigureId::GncResponsive => {
            let (beta, target) = (0.05, 0.17);
            let schedules = [
                ("gnc_fixed", WidthSchedule::Fixed { tau: 0.1 }),
                (
                    "gnc_responsive",
                    WidthSchedule::Responsive {
                        initial: 0.1,
                        growth: 1.4,
                        cap: 0.17,
                    },
                ),
            ];
            let mut rows = Vec::new();
            for n in ns(1_000, if scale == Scale::Desk { 5_000 } else { 100_000 }, 3, 9)? {
                for (series, schedule) in schedules {
                    let spec = gnc_spec(n, gaussian_guess(), TolKind::Chernoff, schedule);
                    rows.push(count_row(series, &prep(gnc_count_config(n, target, beta, sz.horizon, spec)))?);
                }
            }
            write(format!("{}.csv", id.as_str()), &|p| write_csv(p, &rows))?;
            json!({"target_tau": target, "beta": beta, "horizon": sz.horizon, "runs": sz.runs,
                   "schedules": {"fixed": 0.1, "responsive": {"initial": 0.1, "growth": 1.4, "cap": 0.17}},
                   "guess_rho": GNC_GUESS_RHO, "guess_fraction": GNC_GUESS_FRACTION})
        }
    };
    let meta = json!({"figure": id.as_str(), "scale": scale.as_str(), "seed": seed, "settings": meta});
    let meta_path = out_dir.join(format!("{}.meta.json", id.as_str()));
    let text = serde_json::to_string_pretty(&meta).map_err(|e| Error::Config(e.to_string()))?;
    std::fs::write(&meta_path, text + "\n").map_err(|e| Error::io(&meta_path, e))?;
    written.push(meta_path);
    Ok(written)
}

fn guess_thresholdout_params() -> ThresholdoutParams {
    ThresholdoutParams {
        threshold: 0.04,
        sigma: 0.01,
        budget: usize::MAX,
        policy: BudgetPolicy::ContinueAndFlag,
    }
}
