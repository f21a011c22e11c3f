use rand::Rng;

use super::config::{DistributionSpec, ExperimentConfig, GuessSpec, MechanismSpec, WidthSchedule};
use crate::adversary::StrategyState;
use crate::domain::{eval_query, true_value, IntervalAnswer, ProductDistribution, QuerySpec, Transcript, TruthMode};
use crate::error::{Error, Result};
use crate::mechanisms::{
    BudgetPolicy, GnCState, GuessResponse, NoiseKind, NoiseMechConfig, ThresholdoutState,
};
use crate::rng::{stream, Purpose, StreamRng};

/// Outcome of one seeded interaction.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub run_id: usize,
    pub transcript: Transcript,
    /// Answers given before the first ⊥, or the first error or width above
    /// the target `τ`.
    pub answered: usize,
    pub max_abs_error: f64,
    /// Absolute error of the last adaptive query that was answered.
    pub adaptive_error: Option<f64>,
    pub failures: usize,
    pub halted: bool,
    /// Every non-⊥ interval contained its population value.
    pub covered: bool,
}

enum Guesser {
    Noise(NoiseMechConfig),
    Thresholdout(Box<ThresholdoutState>),
}

enum Responder {
    Noise {
        cfg: NoiseMechConfig,
        width: f64,
    },
    Thresholdout {
        state: Box<ThresholdoutState>,
        width: f64,
    },
    Gnc {
        state: Box<GnCState>,
        guesser: Guesser,
        schedule: WidthSchedule,
        tau_i: f64,
    },
}

struct Streams {
    noise: StreamRng,
    guess: StreamRng,
}

impl Responder {
    fn build(cfg: &ExperimentConfig, x: &crate::domain::SampleMatrix, base: u64, run: u64) -> Result<(Self, Streams)> {
        let mut split = stream(base, run, Purpose::Split);
        let mut noise = stream(base, run, Purpose::Noise);
        let guess = stream(base, run, Purpose::Guess);
        // Noise mechanisms report the target width; without one, the trivial width 1.
        let width = cfg.tau.unwrap_or(1.0);
        let responder = match cfg.mechanism {
            MechanismSpec::Empirical => Responder::Noise {
                cfg: NoiseMechConfig::new(NoiseKind::Empirical, cfg.n)?,
                width,
            },
            MechanismSpec::Gaussian { rho } => Responder::Noise {
                cfg: NoiseMechConfig::new(NoiseKind::Gaussian { rho }, cfg.n)?,
                width,
            },
            MechanismSpec::Laplace { eps_prime } => Responder::Noise {
                cfg: NoiseMechConfig::new(NoiseKind::Laplace { eps_prime }, cfg.n)?,
                width,
            },
            MechanismSpec::Thresholdout { holdout, params } => Responder::Thresholdout {
                state: Box::new(ThresholdoutState::from_split(x, holdout, params, &mut split, &mut noise)?),
                width,
            },
            MechanismSpec::GuessAndCheck(g) => {
                let state = GnCState::from_split(x, g.guess_rows, cfg.beta, g.tol, &mut split)?;
                let guesser = match g.guess {
                    GuessSpec::Empirical => Guesser::Noise(NoiseMechConfig::new(NoiseKind::Empirical, g.guess_rows)?),
                    GuessSpec::Gaussian { rho } => {
                        Guesser::Noise(NoiseMechConfig::new(NoiseKind::Gaussian { rho }, g.guess_rows)?)
                    }
                    GuessSpec::Thresholdout { holdout, mut params } => {
                        // A guess is always needed, so the guesser never halts.
                        params.policy = BudgetPolicy::ContinueAndFlag;
                        Guesser::Thresholdout(Box::new(ThresholdoutState::from_split(
                            state.guess_set(),
                            holdout,
                            params,
                            &mut split,
                            &mut noise,
                        )?))
                    }
                };
                Responder::Gnc {
                    state: Box::new(state),
                    guesser,
                    schedule: g.schedule,
                    tau_i: g.schedule.initial(),
                }
            }
        };
        Ok((responder, Streams { noise, guess }))
    }

    fn respond(&mut self, q: &QuerySpec, x: &crate::domain::SampleMatrix, rngs: &mut Streams) -> Result<(IntervalAnswer, Option<f64>)> {
        match self {
            Responder::Noise { cfg, width } => {
                let a = eval_query(q, x)? + cfg.draw(&mut rngs.noise);
                Ok((IntervalAnswer::new(a, *width), None))
            }
            Responder::Thresholdout { state, width } => {
                let out = state.answer(q, &mut rngs.noise)?;
                Ok((
                    out.value.map_or_else(IntervalAnswer::halt, |a| IntervalAnswer::new(a, *width)),
                    None,
                ))
            }
            Responder::Gnc {
                state,
                guesser,
                schedule,
                tau_i,
            } => {
                let raw = match guesser {
                    Guesser::Noise(cfg) => eval_query(q, state.guess_set())? + cfg.draw(&mut rngs.guess),
                    Guesser::Thresholdout(t) => t
                        .answer(q, &mut rngs.guess)?
                        .value
                        .ok_or_else(|| Error::Protocol("guess mechanism halted".into()))?,
                };
                // Guesses are clamped into [0, 1]; certification does not
                // depend on how a guess was produced.
                let guess = GuessResponse {
                    a_g: raw.clamp(0.0, 1.0),
                    tau: *tau_i,
                };
                let out = state.step(q, guess)?;
                if out.answer.failed {
                    *tau_i = schedule.after_failure(*tau_i);
                }
                Ok((out.answer, Some(out.beta_i)))
            }
        }
    }
}

/// Population values: closed form or enumeration when available, otherwise
/// Monte Carlo with a per-query seed drawn from the run's truth stream.
struct TruthOracle<'a> {
    dist: &'a ProductDistribution,
    samples: usize,
    rng: StreamRng,
}

impl TruthOracle<'_> {
    fn value(&mut self, q: &QuerySpec) -> Result<f64> {
        match true_value(q, self.dist, TruthMode::Exact) {
            Ok(v) => Ok(v.value),
            Err(Error::ModeUnsupported(_)) => {
                let seed = self.rng.random();
                Ok(true_value(q, self.dist, TruthMode::Sampled { m: self.samples, seed })?.value)
            }
            Err(e) => Err(e),
        }
    }
}

/// Runs interaction `run_index` of `cfg`. Deterministic in
/// `(cfg.seed, run_index)`.
pub fn run_interaction(cfg: &ExperimentConfig, run_index: usize) -> Result<RunOutcome> {
    cfg.validate()?;
    let run = run_index as u64;
    let mut strategy = StrategyState::new(cfg.strategy.kind, cfg.strategy.k, cfg.clamp_eps(), cfg.strategy.agreement_mode)?;
    let dist = cfg.distribution.build(strategy.d())?;
    let x = dist.sample_with(cfg.n, &mut stream(cfg.seed, run, Purpose::Data))?;
    let (mut responder, mut rngs) = Responder::build(cfg, &x, cfg.seed, run)?;
    let mut truth = TruthOracle {
        dist: &dist,
        samples: cfg.truth_samples,
        rng: stream(cfg.seed, run, Purpose::Truth),
    };
    let mut transcript = Transcript::default();
    let mut answered = 0;
    let mut violated = false;
    let mut adaptive_error = None;
    while let Some(q) = strategy.next_query()? {
        let j = transcript.len() + 1;
        let (answer, beta_i) = responder.respond(&q, &x, &mut rngs)?;
        let value = match (&cfg.distribution, &q) {
            // The vote is independent of a fair target, so agreement is 1/2.
            (DistributionSpec::Uniform, QuerySpec::SignAgreement { include_target: true, .. }) => 0.5,
            _ => truth.value(&q)?,
        };
        strategy.record_answer(answer.point)?;
        transcript.push(q, answer, value, beta_i);
        let err = answer.point.map(|a| (a - value).abs());
        if strategy.is_adaptive(j) && err.is_some() {
            adaptive_error = err;
        }
        if !violated {
            let over = |v: f64| cfg.tau.is_some_and(|t| v > t);
            if answer.is_halt() || over(answer.width) || err.is_some_and(over) {
                violated = true;
            } else {
                answered += 1;
            }
        }
        if violated && cfg.stop_at_violation {
            break;
        }
    }
    Ok(RunOutcome {
        run_id: run_index,
        answered,
        max_abs_error: transcript.max_abs_error(),
        adaptive_error,
        failures: transcript.entries.iter().filter(|e| e.answer.failed).count(),
        halted: transcript.terminated,
        covered: transcript.all_covered(),
        transcript,
    })
}
