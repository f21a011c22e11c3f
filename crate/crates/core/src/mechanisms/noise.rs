use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{eval_query, QuerySpec, SampleMatrix};
use crate::error::{ensure, Result};
use crate::rng::{gaussian, laplace};

/// Which noise, if any, is added to the empirical answer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseKind {
    Empirical,
    /// Gaussian noise with variance `1/(2n²ρ)`.
    Gaussian { rho: f64 },
    /// Laplace noise with scale `1/(nε′)`.
    Laplace { eps_prime: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseMechConfig {
    kind: NoiseKind,
    n: usize,
}

impl NoiseMechConfig {
    pub fn new(kind: NoiseKind, n: usize) -> Result<Self> {
        ensure(n >= 1, || "sample count must be at least 1".into())?;
        match kind {
            NoiseKind::Empirical => {}
            NoiseKind::Gaussian { rho } => ensure(rho > 0.0 && rho.is_finite(), || format!("ρ must be positive, got {rho}"))?,
            NoiseKind::Laplace { eps_prime } => ensure(eps_prime > 0.0 && eps_prime.is_finite(), || {
                format!("ε′ must be positive, got {eps_prime}")
            })?,
        }
        Ok(Self { kind, n })
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Standard deviation (Gaussian) or scale (Laplace) of the added noise.
    pub fn scale(&self) -> f64 {
        let n = self.n as f64;
        match self.kind {
            NoiseKind::Empirical => 0.0,
            NoiseKind::Gaussian { rho } => 1.0 / (n * (2.0 * rho).sqrt()),
            NoiseKind::Laplace { eps_prime } => 1.0 / (n * eps_prime),
        }
    }

    /// One noise draw. Empirical draws nothing.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            NoiseKind::Empirical => 0.0,
            NoiseKind::Gaussian { .. } => gaussian(rng, self.scale()),
            NoiseKind::Laplace { .. } => laplace(rng, self.scale()),
        }
    }
}

/// `φ(X)` plus one noise draw. The result is not clipped to `[0, 1]`.
pub fn noise_answer<R: Rng + ?Sized>(cfg: &NoiseMechConfig, q: &QuerySpec, x: &SampleMatrix, rng: &mut R) -> Result<f64> {
    Ok(eval_query(q, x)? + cfg.draw(rng))
}
