use rand::Rng;
use serde::{Deserialize, Serialize};

use super::matrix::SampleMatrix;
use crate::error::{Error, Result};
use crate::rng::seeded;

/// Product distribution over `{−1, +1}^d`: coordinate `j` is +1 with
/// probability `biases[j − 1]`, independently of the others.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductDistribution {
    biases: Vec<f64>,
}

impl ProductDistribution {
    pub fn new(biases: Vec<f64>) -> Result<Self> {
        if biases.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "distribution needs at least 2 coordinates, got {}",
                biases.len()
            )));
        }
        if let Some((j, p)) = biases.iter().enumerate().find(|(_, p)| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidParameter(format!("bias of coordinate {} is {p}, outside [0, 1]", j + 1)));
        }
        Ok(Self { biases })
    }

    pub fn uniform(d: usize) -> Result<Self> {
        Self::new(vec![0.5; d])
    }

    /// Features with bias `feature`, target with bias `target`.
    pub fn with_target(d: usize, feature: f64, target: f64) -> Result<Self> {
        let mut biases = vec![feature; d];
        if let Some(last) = biases.last_mut() {
            *last = target;
        }
        Self::new(biases)
    }

    /// Features +1 with probability 0.9 and a constant +1 target, so every
    /// correlation query has expectation 0.9.
    pub fn low_variance(d: usize) -> Result<Self> {
        Self::with_target(d, 0.9, 1.0)
    }

    pub fn d(&self) -> usize {
        self.biases.len()
    }

    /// Bias of coordinate `coord` (1-based).
    pub fn bias(&self, coord: usize) -> f64 {
        self.biases[coord - 1]
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    pub fn is_uniform(&self) -> bool {
        self.biases.iter().all(|&p| p == 0.5)
    }

    /// Draws `n` i.i.d. rows, column by column from `rng`.
    pub fn sample_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<SampleMatrix> {
        SampleMatrix::from_columns(n, self.d(), |c, col| fill_column(col, n, self.bias(c), rng))
    }
}

fn fill_column<R: Rng + ?Sized>(col: &mut [u64], n: usize, p: f64, rng: &mut R) {
    if p == 0.0 {
        return;
    }
    if p == 1.0 {
        col.fill(u64::MAX);
        return;
    }
    if p == 0.5 {
        for w in col.iter_mut() {
            *w = rng.random();
        }
        return;
    }
    for r in 0..n {
        if rng.random::<f64>() < p {
            col[r / 64] |= 1 << (r % 64);
        }
    }
}

/// `n` i.i.d. rows from `dist`, reproducible from `seed`.
pub fn sample_dataset(dist: &ProductDistribution, n: usize, seed: u64) -> Result<SampleMatrix> {
    dist.sample_with(n, &mut seeded(seed))
}
