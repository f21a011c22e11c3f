use statrs::function::erf::erfc;

use super::lambda::min_lambda_objective;
use super::{BoundParams, WidthResult};
use crate::error::Result;
use crate::numeric::{integrate, minimize_log};

const RHO_RANGE: (f64, f64) = (1e-18, 1e4);
const RHO_GRID: usize = 221;

/// Sample-accuracy term `(1/(2n))√(ln(4k/β)/ρ)` shared by the Gaussian widths.
fn sample_term(p: &BoundParams, rho: f64) -> f64 {
    ((4.0 * p.kf() / p.beta).ln() / rho).sqrt() / (2.0 * p.nf())
}

fn rzcw_at(p: &BoundParams, rho: f64) -> (f64, f64) {
    let (l, lambda) = min_lambda_objective(2.0 * rho * p.kf() * p.nf());
    ((l / (2.0 * p.nf() * p.beta)).sqrt() + sample_term(p, rho), lambda)
}

fn xr17_at(p: &BoundParams, rho: f64) -> f64 {
    let first = (2.0 / p.nf()) * (2.0 * rho * p.kf() * p.nf() / p.beta + (4.0 / p.beta).ln());
    first.sqrt() + sample_term(p, rho)
}

/// Runs a log-grid plus golden search over ρ unless `p.rho` pins it.
fn over_rho(p: &BoundParams, f: impl Fn(f64) -> f64) -> (f64, f64, Vec<(f64, f64)>) {
    if let Some(rho) = p.rho {
        return (rho, f(rho), Vec::new());
    }
    let mut trace = Vec::new();
    let (rho, v) = minimize_log(
        |r| {
            let v = f(r);
            trace.push((r, v));
            v
        },
        RHO_RANGE.0,
        RHO_RANGE.1,
        RHO_GRID,
        1e-10,
    );
    trace.truncate(RHO_GRID);
    (rho, v, trace)
}

/// Worst-case width of the Gaussian mechanism from the mutual-information
/// transfer: `√(min_λ((2ρkn − ln(1−λ))/λ)/(2nβ)) + (1/(2n))√(ln(4k/β)/ρ)`.
pub fn gaussian_width_rzcw(p: &BoundParams) -> Result<WidthResult> {
    p.validate()?;
    let (rho, tau, trace) = over_rho(p, |r| rzcw_at(p, r).0);
    let lambda = rzcw_at(p, rho).1;
    let mut out = WidthResult::new(tau).with("rho", rho).with("lambda", lambda);
    out.objective_trace = trace;
    Ok(out)
}

/// Comparison width `√((2/n)(2ρkn/β + ln(4/β))) + (1/(2n))√(ln(4k/β)/ρ)`.
pub fn xr17_width(p: &BoundParams) -> Result<WidthResult> {
    p.validate()?;
    let (rho, tau, trace) = over_rho(p, |r| xr17_at(p, r));
    let mut out = WidthResult::new(tau).with("rho", rho);
    out.objective_trace = trace;
    Ok(out)
}

/// `σ√(2 ln(2k/β))`: simultaneous width of `k` Gaussian draws of sd `σ`.
pub fn gaussian_tail_width(sigma: f64, k: usize, beta: f64) -> f64 {
    sigma * (2.0 * (2.0 * k as f64 / beta).ln()).sqrt()
}

/// `b ln(k/β)`: simultaneous width of `k` Laplace draws of scale `b`.
pub fn laplace_tail_width(b: f64, k: usize, beta: f64) -> f64 {
    b * (k as f64 / beta).ln()
}

/// `E[max_{i≤k} Z_i²]` for i.i.d. `Z_i ∼ N(0, σ²)`, by quadrature of
/// `P(max Z² > σ²y) = 1 − erf(√(y/2))^k`.
pub fn max_gaussian_square_mean(sigma: f64, k: usize) -> f64 {
    let kf = k as f64;
    let tail = |y: f64| -(kf * (-erfc((y / 2.0).sqrt())).ln_1p()).exp_m1();
    // Beyond this the tail is below k·e^{−y/2} < 10⁻¹⁷.
    let y_max = 2.0 * (kf.ln() + 40.0);
    // Split at the bulk of the maximum, near y = 2 ln k, for the quadrature.
    let mid = (2.0 * kf.ln()).max(1.0);
    sigma * sigma * (integrate(tail, 0.0, mid, 1e-14, 1e-12) + integrate(tail, mid, y_max, 1e-14, 1e-12))
}

fn gaussian_rmse_at(p: &BoundParams, rho: f64) -> f64 {
    let n = p.nf();
    let (l, _) = min_lambda_objective(2.0 * rho * p.kf() * n);
    let sigma = 1.0 / (n * (2.0 * rho).sqrt());
    (l / (2.0 * n) + 2.0 * max_gaussian_square_mean(sigma, p.k)).sqrt()
}

/// RMSE upper bound for the Gaussian mechanism:
/// `√((1/(2n))·min_λ((2ρkn − ln(1−λ))/λ) + 2E[max Z_i²])` with
/// `Z_i ∼ N(0, 1/(2n²ρ))`. Returned in `tau`.
pub fn gaussian_rmse_bound(p: &BoundParams) -> Result<WidthResult> {
    p.validate()?;
    let (rho, v, trace) = over_rho(p, |r| gaussian_rmse_at(p, r));
    let mut out = WidthResult::new(v).with("rho", rho);
    out.objective_trace = trace;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_term_cancels() {
        let p = BoundParams::new(321, 10, 0.05);
        let rho = (40.0f64 / 0.05).ln();
        assert!((sample_term(&p, rho) - 1.0 / 642.0).abs() < 1e-15);
    }

    #[test]
    fn tail_widths() {
        let two_over_e2 = 2.0 * (-2.0f64).exp();
        assert!((gaussian_tail_width(1.0, 1, two_over_e2) - 2.0).abs() < 1e-14);
        assert_eq!(gaussian_tail_width(0.0, 10, 0.1), 0.0);
        assert!((gaussian_tail_width(0.01, 10_000, 0.05) - 0.01 * (2.0 * 4e5f64.ln()).sqrt()).abs() < 1e-15);
        assert!((laplace_tail_width(1.0, 1, (-1.0f64).exp()) - 1.0).abs() < 1e-15);
        assert_eq!(laplace_tail_width(0.0, 5, 0.1), 0.0);
        assert!((laplace_tail_width(0.002, 500, 0.05) - 0.018_420_7).abs() < 1e-7);
    }

    #[test]
    fn single_gaussian_square_mean_is_variance() {
        assert!((max_gaussian_square_mean(1.0, 1) - 1.0).abs() < 1e-10);
        assert!((max_gaussian_square_mean(0.3, 1) - 0.09).abs() < 1e-11);
    }

    #[test]
    fn rmse_floor() {
        for &k in &[1usize, 10, 1000] {
            for &rho in &[1e-6, 1e-3, 1.0] {
                let p = BoundParams::new(500, k, 0.05).with_rho(rho);
                assert!(gaussian_rmse_bound(&p).unwrap().tau >= (1.0f64 / 1000.0).sqrt());
            }
        }
    }

    #[test]
    fn rzcw_not_above_xr17_when_information_large() {
        for &(n, k, rho) in &[(1000usize, 100usize, 0.01), (5000, 1000, 1e-4), (100, 10, 1.0)] {
            let p = BoundParams::new(n, k, 0.05).with_rho(rho);
            assert!(gaussian_width_rzcw(&p).unwrap().tau <= xr17_width(&p).unwrap().tau);
        }
    }
}
