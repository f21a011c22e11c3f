//! Confidence-budget ledger for guess-and-check: how much failure
//! probability each query may spend, given the failures so far.

use statrs::function::gamma::ln_gamma;

/// `c_j = 6 / (π² (j+1)²)`; these sum to 1 over `j ≥ 0`.
pub fn c_weight(j: usize) -> f64 {
    ln_c_weight(j).exp()
}

pub fn ln_c_weight(j: usize) -> f64 {
    (6.0 / (std::f64::consts::PI * std::f64::consts::PI)).ln() - 2.0 * ((j + 1) as f64).ln()
}

/// `ln C(n, k)`. Small `min(k, n−k)` is summed term by term; larger ones go
/// through log-gamma.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    assert!(k <= n, "C({n}, {k}) undefined");
    let m = k.min(n - k);
    if m <= 10_000 {
        (0..m).map(|j| ((n - j) as f64).ln() - ((j + 1) as f64).ln()).sum()
    } else {
        ln_gamma(n as f64 + 1.0) - ln_gamma(m as f64 + 1.0) - ln_gamma((n - m) as f64 + 1.0)
    }
}

/// `ln ν` where `ν = C(i−1, f) ∏ 1/γ_j` counts the transcripts that could
/// precede query `i` with `f = gammas.len()` failures.
pub fn transcript_count_log(i: usize, gammas: &[f64]) -> f64 {
    assert!(i >= 1 && gammas.len() < i, "need f ≤ i − 1");
    if gammas.is_empty() {
        return 0.0;
    }
    ln_binomial(i - 1, gammas.len()) - gammas.iter().map(|g| g.ln()).sum::<f64>()
}

/// `β_i = β · c_{i−1} · c_f / ν`, computed in log space.
pub fn beta_budget(i: usize, gammas: &[f64], beta: f64) -> f64 {
    (beta.ln() + ln_c_weight(i - 1) + ln_c_weight(gammas.len()) - transcript_count_log(i, gammas)).exp()
}
