use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::distribution::ProductDistribution;
use super::matrix::SampleMatrix;
use crate::error::{Error, Result};
use crate::rng::seeded;

/// A statistical query `φ: {−1,+1}^d → [0, 1]`. Coordinate indices are
/// 1-based; coordinate `d` is the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuerySpec {
    /// `(1 + x(j)·x(d)) / 2`.
    Correlation { feature: usize },
    /// `(1 + sign(Σ w_i x(i)) · t) / 2` with `t = x(d)` if `include_target`,
    /// else 1, and `sign(0) = +1`.
    SignAgreement {
        weights: BTreeMap<usize, f64>,
        include_target: bool,
    },
    Constant { value: f64 },
}

impl QuerySpec {
    pub fn correlation(feature: usize) -> Self {
        QuerySpec::Correlation { feature }
    }

    pub fn constant(value: f64) -> Self {
        QuerySpec::Constant { value }
    }

    pub fn sign_agreement(weights: BTreeMap<usize, f64>, include_target: bool) -> Self {
        QuerySpec::SignAgreement {
            weights,
            include_target,
        }
    }

    /// Short label used in CSV output.
    pub fn kind_name(&self) -> &'static str {
        match self {
            QuerySpec::Correlation { .. } => "correlation",
            QuerySpec::SignAgreement { .. } => "sign_agreement",
            QuerySpec::Constant { .. } => "constant",
        }
    }

    /// Checks indices against a `d`-column domain.
    pub fn validate(&self, d: usize) -> Result<()> {
        match self {
            QuerySpec::Correlation { feature } => {
                if *feature < 1 || *feature >= d {
                    return Err(Error::InvalidQuery(format!(
                        "correlation feature {feature} outside [1, {}]",
                        d - 1
                    )));
                }
            }
            QuerySpec::SignAgreement { weights, .. } => {
                if let Some((&i, _)) = weights.iter().find(|(&i, _)| i < 1 || i >= d) {
                    return Err(Error::InvalidQuery(format!("weight index {i} outside [1, {}]", d - 1)));
                }
                if let Some((i, w)) = weights.iter().find(|(_, w)| !w.is_finite()) {
                    return Err(Error::InvalidQuery(format!("weight at index {i} is {w}")));
                }
            }
            QuerySpec::Constant { value } => {
                if !(0.0..=1.0).contains(value) {
                    return Err(Error::InvalidQuery(format!("constant {value} outside [0, 1]")));
                }
            }
        }
        Ok(())
    }
}

/// Empirical mean of `q` over the rows of `x`.
pub fn eval_query(q: &QuerySpec, x: &SampleMatrix) -> Result<f64> {
    q.validate(x.d())?;
    let n = x.n() as f64;
    Ok(match q {
        QuerySpec::Constant { value } => *value,
        QuerySpec::Correlation { feature } => x.agreements(*feature, x.d()) as f64 / n,
        QuerySpec::SignAgreement {
            weights,
            include_target,
        } => {
            let mut score = vec![0.0f64; x.n()];
            for (&i, &w) in weights {
                let col = x.column(i);
                for (r, s) in score.iter_mut().enumerate() {
                    *s += if (col[r / 64] >> (r % 64)) & 1 == 1 { w } else { -w };
                }
            }
            let target = x.column(x.d());
            let hits = score
                .iter()
                .enumerate()
                .filter(|&(r, &s)| {
                    let positive = s >= 0.0;
                    if *include_target {
                        positive == ((target[r / 64] >> (r % 64)) & 1 == 1)
                    } else {
                        positive
                    }
                })
                .count();
            hits as f64 / n
        }
    })
}

/// How to obtain `φ(D)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruthMode {
    Exact,
    Sampled { m: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrueValue {
    pub value: f64,
    pub std_err: f64,
}

impl TrueValue {
    fn exact(value: f64) -> Self {
        Self { value, std_err: 0.0 }
    }
}

/// Largest sign-agreement support handled by exhaustive enumeration.
pub const MAX_EXACT_SUPPORT: usize = 20;

/// Expectation of `q` under `dist`.
///
/// Exact mode covers constants, correlations, sign agreements with at most
/// [`MAX_EXACT_SUPPORT`] weights, and target-including sign agreements under a
/// fair target (where the answer is 1/2 by symmetry). Sampled mode draws `m`
/// fresh rows over the query's support only.
pub fn true_value(q: &QuerySpec, dist: &ProductDistribution, mode: TruthMode) -> Result<TrueValue> {
    q.validate(dist.d())?;
    match mode {
        TruthMode::Exact => exact_value(q, dist),
        TruthMode::Sampled { m, seed } => sampled_value(q, dist, m, seed),
    }
}

fn exact_value(q: &QuerySpec, dist: &ProductDistribution) -> Result<TrueValue> {
    let d = dist.d();
    match q {
        QuerySpec::Constant { value } => Ok(TrueValue::exact(*value)),
        QuerySpec::Correlation { feature } => {
            let (pj, pd) = (dist.bias(*feature), dist.bias(d));
            Ok(TrueValue::exact((1.0 + (2.0 * pj - 1.0) * (2.0 * pd - 1.0)) / 2.0))
        }
        QuerySpec::SignAgreement {
            weights,
            include_target,
        } => {
            // The target is independent of the sign, so a fair target makes
            // the agreement a fair coin whatever the weights are.
            if *include_target && dist.bias(d) == 0.5 {
                return Ok(TrueValue::exact(0.5));
            }
            if weights.len() > MAX_EXACT_SUPPORT {
                return Err(Error::ModeUnsupported(format!(
                    "sign agreement over {} coordinates (exact limit is {MAX_EXACT_SUPPORT})",
                    weights.len()
                )));
            }
            Ok(TrueValue::exact(enumerate_sign_agreement(weights, *include_target, dist)))
        }
    }
}

fn enumerate_sign_agreement(weights: &BTreeMap<usize, f64>, include_target: bool, dist: &ProductDistribution) -> f64 {
    let support: Vec<(f64, f64)> = weights.iter().map(|(&i, &w)| (dist.bias(i), w)).collect();
    let t = if include_target { 2.0 * dist.bias(dist.d()) - 1.0 } else { 1.0 };
    let mut total = 0.0;
    for mask in 0u32..(1u32 << support.len()) {
        let mut prob = 1.0;
        let mut score = 0.0;
        for (b, &(p, w)) in support.iter().enumerate() {
            if mask >> b & 1 == 1 {
                prob *= p;
                score += w;
            } else {
                prob *= 1.0 - p;
                score -= w;
            }
        }
        let s = if score >= 0.0 { 1.0 } else { -1.0 };
        total += prob * (1.0 + s * t) / 2.0;
    }
    total
}

fn sampled_value(q: &QuerySpec, dist: &ProductDistribution, m: usize, seed: u64) -> Result<TrueValue> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("Monte Carlo truth needs m ≥ 2, got {m}")));
    }
    let d = dist.d();
    // Restrict to the coordinates the query reads, then relabel them 1..=s
    // with the target last.
    let (coords, local) = match q {
        QuerySpec::Constant { value } => return Ok(TrueValue::exact(*value)),
        QuerySpec::Correlation { feature } => (vec![*feature, d], QuerySpec::correlation(1)),
        QuerySpec::SignAgreement {
            weights,
            include_target,
        } => {
            let mut coords: Vec<usize> = weights.keys().copied().collect();
            let local_weights = weights.values().enumerate().map(|(i, &w)| (i + 1, w)).collect();
            coords.push(d);
            (coords, QuerySpec::sign_agreement(local_weights, *include_target))
        }
    };
    let reduced = ProductDistribution::new(coords.iter().map(|&c| dist.bias(c)).collect())?;
    let sample = reduced.sample_with(m, &mut seeded(seed))?;
    let mean = eval_query(&local, &sample)?;
    // Every query kind here is {0,1}-valued, so the sample variance is
    // m/(m−1) · mean(1 − mean).
    let var = mean * (1.0 - mean) * m as f64 / (m - 1) as f64;
    Ok(TrueValue {
        value: mean,
        std_err: (var / m as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::sample_dataset;

    fn weights(pairs: &[(usize, f64)]) -> BTreeMap<usize, f64> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn constant_and_perfect_correlation() {
        let x = SampleMatrix::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(eval_query(&QuerySpec::constant(0.3), &x).unwrap(), 0.3);
        assert_eq!(eval_query(&QuerySpec::correlation(1), &x).unwrap(), 1.0);
    }

    #[test]
    fn correlation_matches_row_enumeration() {
        let x = sample_dataset(&ProductDistribution::uniform(2).unwrap(), 4, 11).unwrap();
        let by_hand: f64 = (0..4)
            .map(|r| (1.0 + f64::from(x.get(r, 1)) * f64::from(x.get(r, 2))) / 2.0)
            .sum::<f64>()
            / 4.0;
        assert_eq!(eval_query(&QuerySpec::correlation(1), &x).unwrap(), by_hand);
    }

    #[test]
    fn sign_agreement_matches_row_enumeration() {
        let x = sample_dataset(&ProductDistribution::uniform(5).unwrap(), 130, 3).unwrap();
        let w = weights(&[(1, 0.7), (2, -1.2), (4, 0.4)]);
        for include_target in [true, false] {
            let by_hand = (0..130)
                .filter(|&r| {
                    let s: f64 = w.iter().map(|(&i, &wi)| wi * f64::from(x.get(r, i))).sum();
                    let sign = if s >= 0.0 { 1 } else { -1 };
                    let t = if include_target { x.get(r, 5) } else { 1 };
                    sign == t
                })
                .count() as f64
                / 130.0;
            let q = QuerySpec::sign_agreement(w.clone(), include_target);
            assert_eq!(eval_query(&q, &x).unwrap(), by_hand);
        }
    }

    #[test]
    fn out_of_range_indices_are_rejected() {
        let x = SampleMatrix::from_rows(&[vec![1, 1, -1]]).unwrap();
        assert!(matches!(eval_query(&QuerySpec::correlation(3), &x), Err(Error::InvalidQuery(_))));
        assert!(matches!(eval_query(&QuerySpec::correlation(0), &x), Err(Error::InvalidQuery(_))));
        let q = QuerySpec::sign_agreement(weights(&[(3, 1.0)]), true);
        assert!(matches!(eval_query(&q, &x), Err(Error::InvalidQuery(_))));
    }

    #[test]
    fn exact_correlation_truth() {
        let u = ProductDistribution::uniform(4).unwrap();
        assert_eq!(true_value(&QuerySpec::correlation(1), &u, TruthMode::Exact).unwrap().value, 0.5);
        let lv = ProductDistribution::low_variance(4).unwrap();
        let v = true_value(&QuerySpec::correlation(1), &lv, TruthMode::Exact).unwrap().value;
        assert!((v - 0.9).abs() < 1e-15);
    }

    #[test]
    fn uniform_sign_agreement_is_half_by_enumeration() {
        // Brute force over all 16 patterns of 3 features and the target.
        let w = weights(&[(1, 0.5), (2, -2.0), (3, 1.1)]);
        let mut hits = 0;
        for mask in 0..16u32 {
            let x = |b: u32| if mask >> b & 1 == 1 { 1.0 } else { -1.0 };
            let s = 0.5 * x(0) - 2.0 * x(1) + 1.1 * x(2);
            let sign = if s >= 0.0 { 1.0 } else { -1.0 };
            if sign == x(3) {
                hits += 1;
            }
        }
        assert_eq!(hits as f64 / 16.0, 0.5);
        let u = ProductDistribution::uniform(4).unwrap();
        let q = QuerySpec::sign_agreement(w, true);
        assert_eq!(true_value(&q, &u, TruthMode::Exact).unwrap().value, 0.5);
    }

    #[test]
    fn biased_enumeration_matches_hand_value() {
        // Single feature with p = 0.9 and a constant target: sign(w·x1) = x1
        // for w > 0, so agreement probability is 0.9.
        let lv = ProductDistribution::low_variance(3).unwrap();
        let q = QuerySpec::sign_agreement(weights(&[(1, 2.0)]), true);
        let v = true_value(&q, &lv, TruthMode::Exact).unwrap().value;
        assert!((v - 0.9).abs() < 1e-15);
        // Empty support: sign(0) = +1, agreement is P(target = +1).
        let q = QuerySpec::sign_agreement(BTreeMap::new(), true);
        let d = ProductDistribution::with_target(3, 0.5, 0.3).unwrap();
        assert!((true_value(&q, &d, TruthMode::Exact).unwrap().value - 0.3).abs() < 1e-15);
    }

    #[test]
    fn exact_mode_refuses_large_support() {
        let d = ProductDistribution::with_target(30, 0.5, 0.7).unwrap();
        let w = (1..=21).map(|i| (i, 1.0)).collect();
        let q = QuerySpec::sign_agreement(w, true);
        assert!(matches!(true_value(&q, &d, TruthMode::Exact), Err(Error::ModeUnsupported(_))));
        assert!(true_value(&q, &d, TruthMode::Sampled { m: 1000, seed: 1 }).is_ok());
    }

    #[test]
    fn sampled_truth_brackets_exact() {
        let d = ProductDistribution::with_target(6, 0.8, 0.6).unwrap();
        let q = QuerySpec::sign_agreement(weights(&[(1, 1.0), (2, 0.5), (5, -0.3)]), true);
        let exact = true_value(&q, &d, TruthMode::Exact).unwrap().value;
        let est = true_value(&q, &d, TruthMode::Sampled { m: 200_000, seed: 4 }).unwrap();
        assert!((est.value - exact).abs() < 5.0 * est.std_err, "{est:?} vs {exact}");
    }
}
