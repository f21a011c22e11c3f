use crate::numeric::golden_section;

/// Largest `s = −ln(1 − λ)` searched, i.e. `λ ≤ 1 − 10⁻¹²`.
const S_MAX: f64 = 27.631_021_115_928_547;
const S_MIN: f64 = 1e-12;

/// `min_{λ∈(0,1)} (B − ln(1−λ))/λ`, returned as `(value, λ*)`.
///
/// Searched in `s = −ln(1−λ)`, where the objective `(B + s)/(1 − e^{−s})` is
/// unimodal.
pub fn min_lambda_objective(b: f64) -> (f64, f64) {
    assert!(b >= 0.0, "objective needs B ≥ 0, got {b}");
    let g = |s: f64| (b + s) / -(-s).exp_m1();
    let (s, v) = golden_section(g, S_MIN, S_MAX, 1e-10);
    (v, -(-s).exp_m1())
}
