use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use adax::adversary::StrategyKind;
use adax::bounds::{BoundName, BoundParams};
use adax::harness::figures::{GNC_GUESS_FRACTION, GNC_GUESS_RHO};
use adax::harness::{
    audit_coverage, bound_sweep, log_sweep, mean_std, miss_rate, rmse_experiment, run_experiment, run_figure,
    sim_rows, write_csv, CsvRow, DistributionSpec, ExperimentConfig, FigureId, GncSpec, GuessSpec, MechanismSpec,
    RmseConfig, RmseMechanism, Scale, StrategySpec, SweepVar, WidthSchedule,
};
use adax::mechanisms::{BudgetPolicy, ThresholdoutParams, TolKind};
use adax::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "adax", version, about = "Confidence intervals for adaptively chosen statistical queries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a worst-case width bound, optionally over a sweep.
    Bound(BoundArgs),
    /// Simulate an analyst against a mechanism and write the transcripts.
    Simulate(SimulateArgs),
    /// Proven versus realized RMSE of the single-adaptive analyst.
    Rmse(RmseArgs),
    /// Regenerate the data behind one figure.
    Figure(FigureArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundKind {
    Rzcw,
    Dfhprr,
    Bnsssu,
    Xr17,
    Thresholdout,
    Split,
    Discretize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Laplace,
    Gaussian,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    name: BoundKind,
    /// Noise family for dfhprr and bnsssu.
    #[arg(long, value_enum, default_value = "gaussian")]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0.05)]
    beta: f64,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    eps_prime: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    holdout: Option<usize>,
    #[arg(long)]
    budget: Option<usize>,
    /// Vary n or k over a log-spaced range, as `n=a:b:steps` or `k=a:b:steps`.
    #[arg(long)]
    sweep: Option<String>,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MechanismKind {
    Gaussian,
    Laplace,
    Empirical,
    Thresholdout,
    Gnc,
}

#[derive(Clone, Copy, ValueEnum)]
enum GuessKind {
    Gaussian,
    Thresholdout,
    Empirical,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Single,
    Quadratic,
}

#[derive(Clone, Copy, ValueEnum)]
enum TolArg {
    Chernoff,
    Mgf,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistArg {
    Uniform,
    LowVariance,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    mechanism: MechanismKind,
    #[arg(long, default_value = "gaussian")]
    guess: GuessKind,
    #[arg(long, default_value = "quadratic")]
    strategy: StrategyArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0.05)]
    beta: f64,
    /// Target width; required for gnc.
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long, default_value_t = 1)]
    runs: usize,
    #[arg(long, env = "ADAX_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "chernoff")]
    tol: TolArg,
    /// Rows given to the guess mechanism (default n/2).
    #[arg(long)]
    split: Option<usize>,
    /// Responsive guess widths `c,cap`: after each failure τ ← min(c·τ, cap).
    #[arg(long)]
    schedule: Option<String>,
    /// ρ of the Gaussian mechanism or Gaussian guesses.
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    eps_prime: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    holdout: Option<usize>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long, default_value = "uniform")]
    distribution: DistArg,
    #[arg(long)]
    truth_samples: Option<usize>,
    /// End each run at its first error or width above τ.
    #[arg(long)]
    stop_at_violation: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum RmseKind {
    Gaussian,
    Thresholdout,
    Empirical,
}

#[derive(Args)]
struct RmseArgs {
    #[arg(long)]
    mechanism: RmseKind,
    #[arg(long, default_value_t = 5000)]
    n: usize,
    /// Log-spaced `a:b:steps`.
    #[arg(long)]
    k_sweep: String,
    #[arg(long, default_value_t = 20)]
    runs: usize,
    #[arg(long, env = "ADAX_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FigureArgs {
    #[arg(long)]
    id: String,
    /// `desk` (minutes) or `full` (long horizons, many runs).
    #[arg(long, default_value = "desk")]
    scale: String,
    #[arg(long, env = "ADAX_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_range(s: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums: Vec<usize> = parts
        .iter()
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| config_err(format!("bad range '{s}', expected a:b:steps")))?;
    match nums[..] {
        [a, b, steps] => log_sweep(a, b, steps),
        _ => Err(config_err(format!("bad range '{s}', expected a:b:steps"))),
    }
}

fn parse_sweep(s: &str) -> Result<(SweepVar, Vec<usize>)> {
    let (var, range) = s
        .split_once('=')
        .ok_or_else(|| config_err(format!("bad sweep '{s}', expected n=a:b:steps or k=a:b:steps")))?;
    let var = match var.trim() {
        "n" => SweepVar::N,
        "k" => SweepVar::K,
        other => return Err(config_err(format!("cannot sweep '{other}', only n or k"))),
    };
    Ok((var, parse_range(range)?))
}

fn emit<T: CsvRow>(out: Option<&Path>, rows: &[T]) -> Result<()> {
    match out {
        Some(p) => write_csv(p, rows),
        None => adax::harness::csv_io::write_rows(std::io::stdout().lock(), Path::new("<stdout>"), rows),
    }
}

fn bound(a: BoundArgs) -> Result<()> {
    let name = match (a.name, a.family) {
        (BoundKind::Rzcw, _) => BoundName::Rzcw,
        (BoundKind::Xr17, _) => BoundName::Xr17,
        (BoundKind::Dfhprr, Family::Laplace) => BoundName::DfhprrLaplace,
        (BoundKind::Dfhprr, Family::Gaussian) => BoundName::DfhprrGaussian,
        (BoundKind::Bnsssu, Family::Laplace) => BoundName::BnsssuLaplace,
        (BoundKind::Bnsssu, Family::Gaussian) => BoundName::BnsssuGaussian,
        (BoundKind::Thresholdout, _) => BoundName::Thresholdout,
        (BoundKind::Split, _) => BoundName::SampleSplit,
        (BoundKind::Discretize, _) => BoundName::Discretization,
    };
    let mut p = BoundParams::new(a.n, a.k, a.beta);
    p.rho = a.rho;
    p.eps_prime = a.eps_prime;
    p.delta = a.delta;
    p.sigma = a.sigma;
    p.threshold = a.threshold;
    p.holdout = a.holdout;
    p.budget = a.budget;
    let (var, values) = match &a.sweep {
        Some(s) => parse_sweep(s)?,
        None => (SweepVar::N, vec![a.n]),
    };
    let rows = bound_sweep(name, &p, var, &values)?;
    emit(a.out.as_deref(), &rows)
}

fn parse_schedule(s: &str, tau: f64) -> Result<WidthSchedule> {
    let bad = || config_err(format!("bad schedule '{s}', expected c,cap"));
    let (c, cap) = s.split_once(',').ok_or_else(bad)?;
    Ok(WidthSchedule::Responsive {
        initial: tau,
        growth: c.trim().parse().map_err(|_| bad())?,
        cap: cap.trim().parse().map_err(|_| bad())?,
    })
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let thresholdout = |rows: usize, budget: usize| {
        (
            a.holdout.unwrap_or(rows / 2),
            ThresholdoutParams {
                threshold: a.threshold.unwrap_or(0.04),
                sigma: a.sigma.unwrap_or(0.01),
                budget: a.budget.unwrap_or(budget),
                policy: BudgetPolicy::Halt,
            },
        )
    };
    let mechanism = match a.mechanism {
        MechanismKind::Empirical => MechanismSpec::Empirical,
        MechanismKind::Gaussian => MechanismSpec::Gaussian {
            rho: a.rho.unwrap_or(0.01),
        },
        MechanismKind::Laplace => MechanismSpec::Laplace {
            eps_prime: a.eps_prime.unwrap_or(0.1),
        },
        MechanismKind::Thresholdout => {
            let (holdout, params) = thresholdout(a.n, a.k + 1);
            MechanismSpec::Thresholdout { holdout, params }
        }
        MechanismKind::Gnc => {
            let tau = a.tau.ok_or_else(|| config_err("gnc needs --tau"))?;
            let guess_rows = a.split.unwrap_or(((a.n as f64) * GNC_GUESS_FRACTION).round() as usize);
            let guess = match a.guess {
                GuessKind::Empirical => GuessSpec::Empirical,
                GuessKind::Gaussian => GuessSpec::Gaussian {
                    rho: a.rho.unwrap_or(GNC_GUESS_RHO),
                },
                GuessKind::Thresholdout => {
                    let (holdout, params) = thresholdout(guess_rows, a.k + 1);
                    GuessSpec::Thresholdout { holdout, params }
                }
            };
            let schedule = match &a.schedule {
                Some(s) => parse_schedule(s, tau)?,
                None => WidthSchedule::Fixed { tau },
            };
            MechanismSpec::GuessAndCheck(GncSpec {
                guess,
                guess_rows,
                tol: match a.tol {
                    TolArg::Chernoff => TolKind::Chernoff,
                    TolArg::Mgf => TolKind::Mgf,
                },
                schedule,
            })
        }
    };
    let strategy = StrategySpec {
        kind: match a.strategy {
            StrategyArg::Single => StrategyKind::SingleAdaptive,
            StrategyArg::Quadratic => StrategyKind::QuadraticAdaptive,
        },
        k: a.k,
        agreement_mode: true,
        clamp_eps: None,
    };
    let mut cfg = ExperimentConfig::new(mechanism, strategy, a.n);
    cfg.beta = a.beta;
    cfg.tau = a.tau;
    cfg.runs = a.runs;
    cfg.seed = a.seed;
    cfg.stop_at_violation = a.stop_at_violation;
    cfg.distribution = match a.distribution {
        DistArg::Uniform => DistributionSpec::Uniform,
        DistArg::LowVariance => DistributionSpec::LowVariance,
    };
    if let Some(m) = a.truth_samples {
        cfg.truth_samples = m;
    }
    let outcomes = run_experiment(&cfg)?;
    let rows = sim_rows(&outcomes);
    write_csv(&a.out, &rows)?;
    let answered: Vec<f64> = outcomes.iter().map(|o| o.answered as f64).collect();
    let (k_mean, k_std) = mean_std(&answered);
    let failures = outcomes.iter().map(|o| o.failures).sum::<usize>() as f64 / outcomes.len() as f64;
    let mut stdout = std::io::stdout().lock();
    writeln!(
        stdout,
        "runs={} answered_mean={k_mean:.3} answered_std={k_std:.3} miss_rate={:.4} audit_miss_rate={:.4} mean_failures={failures:.3}",
        outcomes.len(),
        miss_rate(&outcomes),
        audit_coverage(&rows).unwrap_or(f64::NAN),
    )
    .map_err(|e| Error::Io {
        path: "<stdout>".into(),
        source: e,
    })
}

fn rmse(a: RmseArgs) -> Result<()> {
    let mechanism = match a.mechanism {
        RmseKind::Gaussian => RmseMechanism::Gaussian,
        RmseKind::Thresholdout => RmseMechanism::Thresholdout,
        RmseKind::Empirical => RmseMechanism::Empirical,
    };
    let points = rmse_experiment(&RmseConfig {
        mechanism,
        n: a.n,
        ks: parse_range(&a.k_sweep)?,
        runs: a.runs,
        seed: a.seed,
    })?;
    let rows: Vec<_> = points.into_iter().map(|p| p.row).collect();
    write_csv(&a.out, &rows)
}

fn figure(a: FigureArgs) -> Result<()> {
    let id: FigureId = a.id.parse()?;
    let scale: Scale = a.scale.parse()?;
    std::fs::create_dir_all(&a.out).map_err(|e| Error::Io {
        path: a.out.clone(),
        source: e,
    })?;
    for path in run_figure(id, scale, a.seed, &a.out)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Bound(a) => bound(a),
        Command::Simulate(a) => simulate(a),
        Command::Rmse(a) => rmse(a),
        Command::Figure(a) => figure(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 3 })
        }
    }
}
