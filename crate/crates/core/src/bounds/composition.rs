//! Privacy composition and conversion formulas.

/// `((e^{ε′}−1)/(e^{ε′}+1))·ε′k + ε′√(2k ln(1/δ))`: the ε of `k`-fold adaptive
/// composition of `ε′`-DP steps at slack `δ`.
pub fn advanced_composition(eps_prime: f64, k: f64, delta: f64) -> f64 {
    (eps_prime / 2.0).tanh() * eps_prime * k + eps_prime * (2.0 * k * (1.0 / delta).ln()).sqrt()
}

/// `ρ + 2√(ρ ln(√(πρ)/δ))`: the ε of a `ρ`-zCDP algorithm at slack `δ`.
/// The logarithm is floored at 0 where `√(πρ) < δ`.
pub fn zcdp_to_dp(rho: f64, delta: f64) -> f64 {
    let log = ((std::f64::consts::PI * rho).sqrt() / delta).ln().max(0.0);
    rho + 2.0 * (rho * log).sqrt()
}
