//! Reference computations for the integration tests, written directly from
//! the closed forms and evaluated by brute force so they share no code paths
//! with the library's solvers.
#![allow(dead_code)]

use num::{BigInt, BigRational, One, Signed, Zero};

pub fn log_grid(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..m).map(|i| (a + (b - a) * i as f64 / (m - 1) as f64).exp()).collect()
}

/// Minimum of `f` over a log grid, then over a finer log grid spanning the
/// two neighbouring cells of the coarse minimizer.
pub fn grid_min_1d(f: impl Fn(f64) -> f64, lo: f64, hi: f64, coarse: usize, fine: usize) -> (f64, f64) {
    let g = log_grid(lo, hi, coarse);
    let (i, v) = g
        .iter()
        .map(|&x| f(x))
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, v)| if v < best.1 { (i, v) } else { best });
    let a = g[i.saturating_sub(1)];
    let b = g[(i + 1).min(coarse - 1)];
    log_grid(a, b, fine)
        .into_iter()
        .map(|x| (x, f(x)))
        .fold((g[i], v), |best, (x, v)| if v < best.1 { (x, v) } else { best })
}

/// Two-dimensional analogue of [`grid_min_1d`].
pub fn grid_min_2d(
    f: impl Fn(f64, f64) -> f64,
    x: (f64, f64),
    y: (f64, f64),
    coarse: usize,
    fine: usize,
) -> f64 {
    let gx = log_grid(x.0, x.1, coarse);
    let gy = log_grid(y.0, y.1, coarse);
    let mut best = (f64::INFINITY, 0, 0);
    for (i, &a) in gx.iter().enumerate() {
        for (j, &b) in gy.iter().enumerate() {
            let v = f(a, b);
            if v < best.0 {
                best = (v, i, j);
            }
        }
    }
    let around = |g: &[f64], i: usize| (g[i.saturating_sub(2)], g[(i + 2).min(coarse - 1)]);
    let (xa, xb) = around(&gx, best.1);
    let (ya, yb) = around(&gy, best.2);
    let mut v = best.0;
    for a in log_grid(xa, xb, fine) {
        for b in log_grid(ya, yb, fine) {
            v = v.min(f(a, b));
        }
    }
    v
}

/// `min_λ (b − ln(1−λ))/λ` over 40000 values `λ = 1 − e^{−s}`, `s` log-spaced.
pub fn lambda_grid(b: f64) -> f64 {
    log_grid(1e-9, 60.0, 40_000)
        .into_iter()
        .map(|s| {
            let lambda = -(-s).exp_m1();
            (b + s) / lambda
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn rzcw_oracle(n: f64, k: f64, beta: f64) -> f64 {
    let tau = |rho: f64| {
        (lambda_grid(2.0 * rho * k * n) / (2.0 * n * beta)).sqrt() + ((4.0 * k / beta).ln() / rho).sqrt() / (2.0 * n)
    };
    grid_min_1d(tau, 1e-16, 1.0, 800, 200).1
}

fn monitor_prefactor(beta: f64) -> f64 {
    let s = (1.0 / beta).floor();
    1.0 / (1.0 - (1.0 - beta).powf(s))
}

pub fn bnsssu_laplace_oracle(n: f64, k: f64, beta: f64) -> f64 {
    let s = (1.0 / beta).floor();
    let f = |e: f64, delta: f64| {
        let psi = k * e * (e.exp() - 1.0) / (e.exp() + 1.0) + e * (2.0 * k * (1.0 / delta).ln()).sqrt();
        psi.exp() - 1.0 + 6.0 * delta * s + (k / (2.0 * delta)).ln().max(0.0) / (e * n)
    };
    monitor_prefactor(beta) * grid_min_2d(f, (1e-9, 10.0), (1e-40, 0.5), 2000, 200)
}

pub fn bnsssu_gaussian_oracle(n: f64, k: f64, beta: f64) -> f64 {
    let s = (1.0 / beta).floor();
    let f = |rho: f64, delta: f64| {
        let kr = k * rho;
        let xi = kr + 2.0 * (kr * ((std::f64::consts::PI * kr).sqrt() / delta).ln().max(0.0)).sqrt();
        xi.exp() - 1.0 + 6.0 * delta * s + ((k / delta).ln().max(0.0) / (n * n * rho)).sqrt()
    };
    monitor_prefactor(beta) * grid_min_2d(f, (1e-16, 10.0), (1e-40, 0.5), 2000, 200)
}

/// Smallest `u` on a fine log grid meeting `ok`, scanning upward.
fn first_feasible(ok: impl Fn(f64) -> bool) -> f64 {
    log_grid(1e-5, 20.0, 60_000).into_iter().find(|&u| ok(u)).unwrap_or(f64::INFINITY)
}

pub fn dfhprr_laplace_oracle(n: f64, k: f64, beta: f64) -> f64 {
    let floor = (48.0 / n * (8.0 / beta).ln()).sqrt();
    let tau = |e: f64| {
        let shift = 4.0 * e * k * (e.exp() - 1.0) / (e.exp() + 1.0);
        let rhs = 256.0 * e * e * k * (16.0 / beta).ln();
        let u = first_feasible(|u| u >= floor && u >= shift && (u - shift) * (u - shift) * u >= rhs);
        u + (2.0 * k / beta).ln() / (n * e)
    };
    grid_min_1d(tau, 1e-9, 10.0, 400, 100).1
}

pub fn dfhprr_gaussian_oracle(n: f64, k: f64, beta: f64) -> f64 {
    let floor = (48.0 / n * (8.0 / beta).ln()).sqrt();
    let tau = |rho: f64| {
        let rk = rho * k;
        let lead = 64.0 * rk * (std::f64::consts::PI * rk).sqrt().ln();
        let rhs = 64.0 * rk * (16.0 / beta).ln();
        let u = first_feasible(|u| {
            u >= floor && u >= 4.0 * rk && ((u - 4.0 * rk) * (u - 4.0 * rk) - lead) * u >= rhs
        });
        u + ((4.0 * k / beta).ln() / rho).sqrt() / (2.0 * n)
    };
    grid_min_1d(tau, 1e-16, 10.0, 400, 100).1
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// `C(n, j)` for `j = 0..=n`.
fn binomials(n: u64) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for j in 1..=n {
        let prev = row[j as usize - 1].clone();
        row.push(prev * BigInt::from(n - j + 1) / BigInt::from(j));
    }
    row
}

/// `P(Bin(n, p) ≥ j)` for every `j = 0..=n+1`, exactly.
pub fn binomial_upper_tails(n: u64, p: &BigRational) -> Vec<BigRational> {
    assert!(!p.is_negative() && *p <= BigRational::one());
    let q = BigRational::one() - p;
    let c = binomials(n);
    let mut pmf = Vec::with_capacity(n as usize + 1);
    for j in 0..=n {
        let term = BigRational::from_integer(c[j as usize].clone())
            * num::pow(p.clone(), j as usize)
            * num::pow(q.clone(), (n - j) as usize);
        pmf.push(term);
    }
    let mut tails = vec![BigRational::zero(); n as usize + 2];
    for j in (0..=n as usize).rev() {
        tails[j] = &tails[j + 1] + &pmf[j];
    }
    tails
}

/// `x ≤ bound·(1 + rel)` in exact arithmetic, with `bound` taken as the
/// exact value of its float.
pub fn le_with_slack(x: &BigRational, bound: f64, rel: f64) -> bool {
    *x <= exact(bound) * exact(1.0 + rel)
}

/// Monte Carlo mean and standard error.
pub fn mc_mean(samples: &[f64]) -> (f64, f64) {
    let m = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / m;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}
