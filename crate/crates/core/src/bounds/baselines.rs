//! Non-private baselines: fresh samples per query, and rounding full-data
//! answers to a grid of spacing `γ`.

use super::{BoundParams, WidthResult};
use crate::error::Result;
use crate::numeric::golden_section;

/// `√(k ln(2k/β)/(2n))`: Hoeffding on `n/k` fresh rows with a union over `k`.
pub fn sample_split_width(p: &BoundParams) -> Result<f64> {
    p.validate()?;
    Ok((p.kf() * (2.0 * p.kf() / p.beta).ln() / (2.0 * p.nf())).sqrt())
}

/// Width when answers are rounded to a grid with `points` values
/// (`⌊1/γ⌋ + 1`), charging query `i` the budget
/// `β/(points^{i−1} i(i+1))` and reporting the worst query `k`.
fn width_with_points(p: &BoundParams, gamma: f64, points: f64) -> f64 {
    let k = p.kf();
    let ln_beta_k = p.beta.ln() - (k - 1.0) * points.ln() - k.ln() - (k + 1.0).ln();
    gamma / 2.0 + ((2f64.ln() - ln_beta_k) / (2.0 * p.nf())).sqrt()
}

/// Discretization width at a given grid spacing `γ ∈ (0, 1]`.
pub fn discretization_width_at(p: &BoundParams, gamma: f64) -> Result<f64> {
    p.validate()?;
    Ok(width_with_points(p, gamma, (1.0 / gamma).floor() + 1.0))
}

/// Discretization width minimized over `γ`.
///
/// For `⌊1/γ⌋ = m` the width grows with `γ`, so the infimum over that cell
/// is approached as `γ ↓ 1/(m+1)`; the search runs over `m`.
pub fn discretization_width(p: &BoundParams) -> Result<WidthResult> {
    p.validate()?;
    let at = |m: f64| width_with_points(p, 1.0 / (m + 1.0), m + 1.0);
    let (lm, _) = golden_section(|t| at(t.exp()), 0.0, 9.0 * std::f64::consts::LN_10, 1e-9);
    let m0 = lm.exp();
    let (m, v) = [m0.floor().max(1.0), m0.ceil().max(1.0)]
        .into_iter()
        .map(|m| (m, at(m)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("two candidates");
    Ok(WidthResult::new(v).with("gamma", 1.0 / (m + 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_reference_values() {
        let two_over_e2 = 2.0 * (-2.0f64).exp();
        assert!((sample_split_width(&BoundParams::new(1, 1, two_over_e2)).unwrap() - 1.0).abs() < 1e-14);
        let v = sample_split_width(&BoundParams::new(5000, 100, 0.05)).unwrap();
        assert!((v - (100.0 * 4000f64.ln() / 1e4).sqrt()).abs() < 1e-15);
        assert!((v - 0.287_994).abs() < 1e-6);
    }

    #[test]
    fn split_grows_superlinearly() {
        let w = |k| sample_split_width(&BoundParams::new(10_000, k, 0.05)).unwrap().powi(2);
        for k in [1usize, 5, 50, 500] {
            assert!(w(2 * k) > 2.0 * w(k));
        }
    }

    #[test]
    fn single_query_reduces_to_hoeffding() {
        let p = BoundParams::new(2000, 1, 0.05);
        let r = discretization_width(&p).unwrap();
        let hoeffding = ((2.0 / (0.05f64 / 2.0)).ln() / 4000.0).sqrt();
        assert!(r.tau >= hoeffding && r.tau - hoeffding < 1e-6);
    }

    #[test]
    fn discretization_nondecreasing_in_k() {
        let mut prev = 0.0;
        for k in 1..60 {
            let v = discretization_width_at(&BoundParams::new(5000, k, 0.05), 0.02).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }
}
