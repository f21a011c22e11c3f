use rand::Rng;
use serde::{Deserialize, Serialize};

use super::budget::beta_budget;
use super::tolerance::{floor_to_grid, gamma_discretization, holdout_tol_chernoff, holdout_tol_mgf};
use crate::domain::{eval_query, IntervalAnswer, QuerySpec, SampleMatrix};
use crate::error::{ensure, Error, Result};

/// How the holdout tolerance `τ_h` is computed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TolKind {
    #[default]
    Chernoff,
    Mgf,
}

/// A guessed answer `a_g` with a proposed width `τ_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuessResponse {
    pub a_g: f64,
    pub tau: f64,
}

/// Everything a single guess-and-check round produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnCOutcome {
    pub answer: IntervalAnswer,
    pub beta_i: f64,
    pub a_h: f64,
    /// `None` when the tolerance solver found no admissible value.
    pub tau_h: Option<f64>,
}

/// Guess-and-check: a guess is certified against a holdout, and a failed
/// check falls back to a discretized holdout answer while charging the
/// confidence budget for the extra transcripts this makes possible.
#[derive(Debug, Clone)]
pub struct GnCState {
    guess_set: SampleMatrix,
    holdout: SampleMatrix,
    gammas: Vec<f64>,
    next: usize,
    beta: f64,
    tol: TolKind,
    halted: bool,
}

impl GnCState {
    pub fn new(guess_set: SampleMatrix, holdout: SampleMatrix, beta: f64, tol: TolKind) -> Result<Self> {
        ensure(beta > 0.0 && beta < 1.0, || format!("β must lie in (0, 1), got {beta}"))?;
        ensure(guess_set.d() == holdout.d(), || "guess and holdout widths differ".into())?;
        Ok(Self {
            guess_set,
            holdout,
            gammas: Vec::new(),
            next: 1,
            beta,
            tol,
            halted: false,
        })
    }

    /// Randomly splits `x` into `n_g` guess rows and `n − n_g` holdout rows.
    pub fn from_split<R: Rng + ?Sized>(x: &SampleMatrix, n_g: usize, beta: f64, tol: TolKind, rng: &mut R) -> Result<Self> {
        let (guess_set, holdout) = x.random_split(n_g, rng)?;
        Self::new(guess_set, holdout, beta, tol)
    }

    pub fn guess_set(&self) -> &SampleMatrix {
        &self.guess_set
    }

    pub fn holdout(&self) -> &SampleMatrix {
        &self.holdout
    }

    pub fn failures(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    /// Index of the next query, starting at 1.
    pub fn next_index(&self) -> usize {
        self.next
    }

    pub fn is_halted(&self) -> bool {
        self.halted
    }

    /// Budget the next query would receive.
    pub fn next_beta(&self) -> f64 {
        beta_budget(self.next, &self.gammas, self.beta)
    }

    /// Certifies `guess` for `q` against the holdout.
    pub fn step(&mut self, q: &QuerySpec, guess: GuessResponse) -> Result<GnCOutcome> {
        if self.halted {
            return Err(Error::MechanismHalted);
        }
        let a_h = eval_query(q, &self.holdout)?;
        self.step_with_holdout(a_h, guess)
    }

    /// As [`step`](Self::step) with the holdout mean `a_h` already known.
    pub fn step_with_holdout(&mut self, a_h: f64, guess: GuessResponse) -> Result<GnCOutcome> {
        if self.halted {
            return Err(Error::MechanismHalted);
        }
        let GuessResponse { a_g, tau } = guess;
        ensure((0.0..=1.0).contains(&a_g), || format!("guess {a_g} outside [0, 1]"))?;
        ensure(tau > 0.0 && tau.is_finite(), || format!("guess width must be positive, got {tau}"))?;
        let n_h = self.holdout.n();
        let beta_i = self.next_beta();
        let tau_h = match self.tol {
            TolKind::Chernoff => Some(holdout_tol_chernoff(beta_i, n_h)),
            TolKind::Mgf => holdout_tol_mgf(beta_i, a_g, tau, a_h, n_h),
        };
        let passed = tau_h.is_some_and(|th| (a_g - a_h).abs() <= tau - th);
        let answer = if passed {
            IntervalAnswer::new(a_g, tau)
        } else {
            let gamma = gamma_discretization(tau, beta_i, n_h);
            if gamma > 0.0 {
                self.gammas.push(gamma);
                IntervalAnswer {
                    point: Some(floor_to_grid(a_h, gamma)),
                    width: tau,
                    failed: true,
                }
            } else {
                self.halted = true;
                IntervalAnswer::halt()
            }
        };
        if !self.halted {
            self.next += 1;
        }
        Ok(GnCOutcome {
            answer,
            beta_i,
            a_h,
            tau_h,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{sample_dataset, ProductDistribution};

    fn state(n_h: usize, beta: f64, tol: TolKind) -> GnCState {
        let u = ProductDistribution::uniform(3).unwrap();
        GnCState::new(sample_dataset(&u, 10, 1).unwrap(), sample_dataset(&u, n_h, 2).unwrap(), beta, tol).unwrap()
    }

    #[test]
    fn exact_guess_passes() {
        let mut st = state(10_000, 0.05, TolKind::Chernoff);
        let out = st.step_with_holdout(0.4, GuessResponse { a_g: 0.4, tau: 0.5 }).unwrap();
        assert_eq!(out.answer, IntervalAnswer::new(0.4, 0.5));
        assert_eq!(st.next_index(), 2);
    }

    #[test]
    fn width_below_holdout_tolerance_always_fails() {
        let mut st = state(100, 0.05, TolKind::Chernoff);
        let tau_h = holdout_tol_chernoff(st.next_beta(), 100);
        let out = st.step_with_holdout(0.4, GuessResponse { a_g: 0.4, tau: 0.5 * tau_h }).unwrap();
        assert!(out.answer.is_halt());
        assert!(st.is_halted());
        assert!(matches!(st.step_with_holdout(0.4, GuessResponse { a_g: 0.4, tau: 0.5 }), Err(Error::MechanismHalted)));
    }

    #[test]
    fn failure_rounds_holdout_value_down() {
        let mut st = state(1000, 0.05, TolKind::Chernoff);
        let out = st.step_with_holdout(0.437, GuessResponse { a_g: 0.9, tau: 0.1 }).unwrap();
        assert!(out.answer.failed);
        let gamma = st.gammas()[0];
        let p = out.answer.point.unwrap();
        assert!(p <= 0.437 && 0.437 - p < gamma);
        assert_eq!(st.failures(), 1);
        assert_eq!(st.next_index(), 2);
    }

    #[test]
    fn rejects_malformed_guesses() {
        let mut st = state(100, 0.05, TolKind::Mgf);
        assert!(st.step_with_holdout(0.5, GuessResponse { a_g: 1.2, tau: 0.1 }).is_err());
        assert!(st.step_with_holdout(0.5, GuessResponse { a_g: 0.5, tau: 0.0 }).is_err());
    }
}
