use crate::numeric::integrate;

/// `(E[M], E[M²])` for `M` the maximum of `m` i.i.d. Laplace(0, b) draws.
///
/// Computed at `b = 1` and rescaled. The negative half-line has closed forms
/// (`F(x)^m = 2^{−m}e^{mx}` there); the positive half is integrated with
/// `1 − F^m = −expm1(m·ln1p(−e^{−x}/2))` for accuracy in the far tail.
pub fn laplace_max_moments(b: f64, m: usize) -> (f64, f64) {
    assert!(m >= 1 && b >= 0.0, "need m ≥ 1 and b ≥ 0");
    let mf = m as f64;
    let upper = |x: f64| -(mf * (-0.5 * (-x).exp()).ln_1p()).exp_m1();
    let neg_mass = 0.5f64.powi(m.min(1100) as i32);
    let x_max = mf.ln() + 45.0;
    let mid = mf.ln().max(1.0);
    let int = |f: &dyn Fn(f64) -> f64| integrate(f, 0.0, mid, 1e-15, 1e-13) + integrate(f, mid, x_max, 1e-15, 1e-13);
    let mean = int(&upper) - neg_mass / mf;
    let second = int(&|x| 2.0 * x * upper(x)) + 2.0 * neg_mass / (mf * mf);
    (b * mean, b * b * second)
}
