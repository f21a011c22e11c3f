//! Widths from the DP transfer theorem with a `√(48/n · ln(8/β))` floor:
//! for each value of the free privacy parameter, the smallest `τ` meeting
//! the program's constraints is found by bisection, then the parameter is
//! optimized on a log grid.

use super::{BoundParams, NoiseFamily, WidthResult};
use crate::error::Result;
use crate::numeric::{bisect_boundary, minimize_log};

/// Smallest `u ≥ lo` with `ok(u)`, for a predicate monotone in `u`.
fn smallest_feasible(lo: f64, ok: impl Fn(f64) -> bool) -> f64 {
    if ok(lo) {
        return lo;
    }
    let mut hi = lo.max(1e-12) * 2.0;
    while !ok(hi) {
        hi *= 2.0;
        if !hi.is_finite() {
            return f64::INFINITY;
        }
    }
    bisect_boundary(ok, lo, hi, 1e-13 * hi)
}

/// Width at a fixed Laplace `ε′`.
fn laplace_at(p: &BoundParams, eps_prime: f64) -> f64 {
    let (n, k, beta) = (p.nf(), p.kf(), p.beta);
    let tau_prime = (2.0 * k / beta).ln() / (n * eps_prime);
    let floor = (48.0 / n * (8.0 / beta).ln()).sqrt();
    let a = 4.0 * eps_prime * k * (eps_prime / 2.0).tanh();
    let c = 256.0 * eps_prime * eps_prime * k * (16.0 / beta).ln();
    let u = smallest_feasible(floor.max(a), |u| (u - a).powi(2) * u >= c);
    u + tau_prime
}

/// Width at a fixed Gaussian `ρ`, using the program's constraint
/// `((u − 4ρk)² − 64ρk ln√(πρk))·u ≥ 64ρk ln(16/β)` on `u = τ − τ′`.
fn gaussian_at(p: &BoundParams, rho: f64) -> f64 {
    let (n, k, beta) = (p.nf(), p.kf(), p.beta);
    let tau_prime = ((4.0 * k / beta).ln() / rho).sqrt() / (2.0 * n);
    let floor = (48.0 / n * (8.0 / beta).ln()).sqrt();
    let rk = rho * k;
    let a = 4.0 * rk;
    let l = 64.0 * rk * (std::f64::consts::PI * rk).sqrt().ln();
    let c = 64.0 * rk * (16.0 / beta).ln();
    let lo = floor.max(a + l.max(0.0).sqrt());
    let u = smallest_feasible(lo, |u| ((u - a).powi(2) - l) * u >= c);
    u + tau_prime
}

pub fn dfhprr_width(family: NoiseFamily, p: &BoundParams) -> Result<WidthResult> {
    p.validate()?;
    let (name, fixed, range): (&str, Option<f64>, (f64, f64)) = match family {
        NoiseFamily::Laplace => ("eps_prime", p.eps_prime, (1e-9, 10.0)),
        NoiseFamily::Gaussian => ("rho", p.rho, (1e-18, 10.0)),
    };
    let f = |x: f64| match family {
        NoiseFamily::Laplace => laplace_at(p, x),
        NoiseFamily::Gaussian => gaussian_at(p, x),
    };
    if let Some(x) = fixed {
        return Ok(WidthResult::new(f(x)).with(name, x));
    }
    let mut trace = Vec::new();
    let points = 241;
    let (x, tau) = minimize_log(
        |x| {
            let v = f(x);
            trace.push((x, v));
            v
        },
        range.0,
        range.1,
        points,
        1e-10,
    );
    trace.truncate(points);
    let mut out = WidthResult::new(tau).with(name, x);
    out.objective_trace = trace;
    Ok(out)
}
