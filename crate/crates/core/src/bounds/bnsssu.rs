//! Widths from the multi-sample monitor argument: a prefactor
//! `1/(1 − (1−β)^s)` with `s = ⌊1/β⌋` times an infimum over the privacy
//! parameter and `δ`, searched on a refining 2-D log grid.

use super::composition::{advanced_composition, zcdp_to_dp};
use super::{BoundParams, NoiseFamily, WidthResult};
use crate::error::Result;
use crate::numeric::refine_log_grid_2d;

const DELTA_RANGE: (f64, f64) = (1e-60, 0.999);

pub(crate) fn copies(beta: f64) -> f64 {
    (1.0 / beta).floor()
}

pub(crate) fn prefactor(beta: f64) -> f64 {
    1.0 / (1.0 - (1.0 - beta).powf(copies(beta)))
}

fn laplace_objective(p: &BoundParams, eps_prime: f64, delta: f64) -> f64 {
    let s = copies(p.beta);
    let psi = advanced_composition(eps_prime, p.kf(), delta);
    psi.exp_m1() + 6.0 * delta * s + (p.kf() / (2.0 * delta)).ln().max(0.0) / (eps_prime * p.nf())
}

fn gaussian_objective(p: &BoundParams, rho: f64, delta: f64) -> f64 {
    let s = copies(p.beta);
    // k steps of ρ-zCDP compose to kρ-zCDP, converted to (ξ, δ)-DP.
    let xi = zcdp_to_dp(p.kf() * rho, delta);
    xi.exp_m1() + 6.0 * delta * s + ((p.kf() / delta).ln().max(0.0) / (p.nf() * p.nf() * rho)).sqrt()
}

pub fn bnsssu_width(family: NoiseFamily, p: &BoundParams) -> Result<WidthResult> {
    p.validate()?;
    let pre = prefactor(p.beta);
    let (name, fixed, range) = match family {
        NoiseFamily::Laplace => ("eps_prime", p.eps_prime, (1e-9, 10.0)),
        NoiseFamily::Gaussian => ("rho", p.rho, (1e-18, 10.0)),
    };
    let f = |x: f64, d: f64| match family {
        NoiseFamily::Laplace => laplace_objective(p, x, d),
        NoiseFamily::Gaussian => gaussian_objective(p, x, d),
    };
    let x_range = fixed.map_or(range, |x| (x, x * (1.0 + 1e-15)));
    let d_range = p.delta.map_or(DELTA_RANGE, |d| (d, d * (1.0 + 1e-15)));
    let best = refine_log_grid_2d(f, x_range, d_range, 3, 64);
    Ok(WidthResult::new(pre * best.value).with(name, best.x).with("delta", best.y))
}
