//! Holdout tolerances: how far a holdout mean may drift from the truth at a
//! given confidence, by Hoeffding/Chernoff or by the binomial MGF.

use crate::numeric::{bisect_boundary, bisect_root};

/// Smallest tolerance returned by [`holdout_tol_mgf`].
pub const MGF_TOL_FLOOR: f64 = 1e-6;

const ELL_MAX: f64 = 50.0;
const ELL_TOL: f64 = 1e-12;
const TAU_TOL: f64 = 1e-6;

/// `√(ln(2/β)/(2n))`.
pub fn holdout_tol_chernoff(beta_i: f64, n_h: usize) -> f64 {
    ((2.0 / beta_i).ln() / (2.0 * n_h as f64)).sqrt()
}

/// Stationary point `ℓ > 0` of `ln(1 + μ(e^ℓ − 1)) − ℓq`, i.e. the root of
/// `μe^ℓ / (1 + μ(e^ℓ − 1)) = q`, by bisection on `(0, 50]`. Requires
/// `0 < μ < q < 1`; saturates at 50.
pub fn mgf_ell(mu: f64, q: f64) -> f64 {
    let g = |ell: f64| 1.0 / (1.0 + (1.0 - mu) * (-ell).exp() / mu) - q;
    if g(ELL_MAX) <= 0.0 {
        return ELL_MAX;
    }
    bisect_root(g, 0.0, ELL_MAX, ELL_TOL)
}

/// `ln` of the MGF tail bound `((1 + μ(e^ℓ − 1)) / e^{ℓq})^n` on
/// `P(Bin(n, μ) ≥ nq)`.
pub fn ln_mgf_bound(n: usize, mu: f64, q: f64, ell: f64) -> f64 {
    n as f64 * ((mu * ell.exp_m1()).ln_1p() - ell * q)
}

/// `ln` of the MGF bound at the solver's `ℓ`, including the `q ≥ 1` limits.
fn ln_mgf_tail(n: usize, mu: f64, q: f64) -> f64 {
    if q > 1.0 {
        f64::NEG_INFINITY
    } else if q == 1.0 {
        n as f64 * mu.ln()
    } else if q <= mu {
        0.0
    } else {
        ln_mgf_bound(n, mu, q, mgf_ell(mu, q))
    }
}

/// Smallest `τ′ ∈ (0, τ)` whose MGF bound on the one-sided deviation of a
/// holdout mean is at most `β_i/2`.
///
/// The worst-case mean is `μ = a_g − τ` when `a_g > a_h` and `1 − a_g − τ`
/// otherwise. A nonpositive `μ` makes the requirement vacuous and yields
/// [`MGF_TOL_FLOOR`]. Returns `None` when no `τ′ < τ` suffices.
pub fn holdout_tol_mgf(beta_i: f64, a_g: f64, tau: f64, a_h: f64, n_h: usize) -> Option<f64> {
    let mu = if a_g > a_h { a_g - tau } else { 1.0 - a_g - tau };
    if mu <= 0.0 {
        return Some(MGF_TOL_FLOOR);
    }
    let target = (beta_i / 2.0).ln();
    let ok = |t: f64| ln_mgf_tail(n_h, mu, mu + t) <= target;
    if !ok(tau) {
        return None;
    }
    if ok(MGF_TOL_FLOOR) {
        return Some(MGF_TOL_FLOOR);
    }
    let t = bisect_boundary(ok, MGF_TOL_FLOOR, tau, TAU_TOL);
    (t < tau).then_some(t)
}

/// Largest `γ ∈ [0, τ_i)` with `2e^{−2(τ_i−γ)²n_h} ≤ β_i`, floored at 0.
/// Zero means no valid discretization exists.
pub fn gamma_discretization(tau_i: f64, beta_i: f64, n_h: usize) -> f64 {
    (tau_i - holdout_tol_chernoff(beta_i, n_h)).max(0.0)
}

/// `y` rounded down to a multiple of `γ`, guaranteed within `γ` of `y`.
pub fn floor_to_grid(y: f64, gamma: f64) -> f64 {
    let mut r = gamma * (y / gamma).floor();
    if r > y {
        r -= gamma;
    }
    if y - r >= gamma {
        r += gamma;
    }
    r
}
