//! Scalar solvers shared by the bound computations: golden-section search,
//! bisection, log-grid refinement and adaptive Gauss–Kronrod quadrature.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimum of `f` on `[a, b]`.
///
/// Returns `(x_min, f_min)`. Stops once the bracket is narrower than `tol`.
pub fn golden_section<F>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iter = 0;
    while (b - a).abs() > tol && iter < 400 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iter += 1;
    }
    // The endpoints are never evaluated by the loop; include them so that a
    // minimum sitting on the boundary is reported exactly.
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for x in [a, b] {
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Minimizes `f` over `[lo, hi]` (both > 0) by scanning a log-spaced grid of
/// `points` values and finishing with golden-section in log space around the
/// best grid point.
pub fn minimize_log<F>(mut f: F, lo: f64, hi: f64, points: usize, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    assert!(lo > 0.0 && hi > lo && points >= 3);
    let (llo, lhi) = (lo.ln(), hi.ln());
    let step = (lhi - llo) / (points - 1) as f64;
    let mut best = (0usize, f64::INFINITY);
    for i in 0..points {
        let v = f((llo + step * i as f64).exp());
        if v < best.1 {
            best = (i, v);
        }
    }
    let left = llo + step * best.0.saturating_sub(1) as f64;
    let right = llo + step * (best.0 + 1).min(points - 1) as f64;
    let (lx, fx) = golden_section(|t| f(t.exp()), left, right, tol);
    (lx.exp(), fx)
}

/// Bisection for the boundary of a monotone predicate.
///
/// `pred(lo)` must be false and `pred(hi)` true; returns a point `x` with
/// `pred(x)` true and within `tol` of the boundary.
pub fn bisect_boundary<P>(mut pred: P, mut lo: f64, mut hi: f64, tol: f64) -> f64
where
    P: FnMut(f64) -> bool,
{
    let mut iter = 0;
    while hi - lo > tol && iter < 200 {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        iter += 1;
    }
    hi
}

/// Root of a continuous `g` on `[lo, hi]` with `g(lo) <= 0 <= g(hi)` (or the
/// reverse), by bisection to absolute tolerance `tol`.
pub fn bisect_root<G>(mut g: G, mut lo: f64, mut hi: f64, tol: f64) -> f64
where
    G: FnMut(f64) -> f64,
{
    let increasing = g(hi) >= g(lo);
    let mut iter = 0;
    while hi - lo > tol && iter < 300 {
        let mid = 0.5 * (lo + hi);
        let v = g(mid);
        if (v >= 0.0) == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
        iter += 1;
    }
    0.5 * (lo + hi)
}

/// Result of a two-dimensional grid search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMin {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

/// Minimizes `f(x, y)` over a box with `rounds` rounds of `size`×`size`
/// log-spaced grids, each round zooming to the two grid cells around the
/// incumbent.
pub fn refine_log_grid_2d<F>(
    mut f: F,
    (mut x_lo, mut x_hi): (f64, f64),
    (mut y_lo, mut y_hi): (f64, f64),
    rounds: usize,
    size: usize,
) -> GridMin
where
    F: FnMut(f64, f64) -> f64,
{
    assert!(size >= 3);
    let mut best = GridMin {
        x: x_lo,
        y: y_lo,
        value: f64::INFINITY,
    };
    for _ in 0..rounds {
        let (lx0, lx1) = (x_lo.ln(), x_hi.ln());
        let (ly0, ly1) = (y_lo.ln(), y_hi.ln());
        let dx = (lx1 - lx0) / (size - 1) as f64;
        let dy = (ly1 - ly0) / (size - 1) as f64;
        let mut at = (0usize, 0usize);
        for i in 0..size {
            let x = (lx0 + dx * i as f64).exp();
            for j in 0..size {
                let y = (ly0 + dy * j as f64).exp();
                let v = f(x, y);
                if v < best.value {
                    best = GridMin { x, y, value: v };
                    at = (i, j);
                }
            }
        }
        if !best.value.is_finite() {
            break;
        }
        // Zoom only if the incumbent was found on this round's grid; otherwise
        // keep the box centred on the carried-over incumbent.
        let (ci, cj) = if best.x >= x_lo && best.x <= x_hi && best.y >= y_lo && best.y <= y_hi {
            at
        } else {
            (
                ((best.x.ln() - lx0) / dx).round().clamp(0.0, (size - 1) as f64) as usize,
                ((best.y.ln() - ly0) / dy).round().clamp(0.0, (size - 1) as f64) as usize,
            )
        };
        x_lo = (lx0 + dx * ci.saturating_sub(1) as f64).exp();
        x_hi = (lx0 + dx * (ci + 1).min(size - 1) as f64).exp();
        y_lo = (ly0 + dy * cj.saturating_sub(1) as f64).exp();
        y_hi = (ly0 + dy * (cj + 1).min(size - 1) as f64).exp();
    }
    best
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod_15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of `f` on `[a, b]`.
///
/// Subdivides until the summed error estimate is below
/// `max(abs_tol, rel_tol * |integral|)`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> f64 {
    let mut intervals: Vec<(f64, f64, f64, f64)> = Vec::new();
    let (v, e) = gauss_kronrod_15(&mut f, a, b);
    intervals.push((a, b, v, e));
    for _ in 0..2000 {
        let total: f64 = intervals.iter().map(|iv| iv.2).sum();
        let err: f64 = intervals.iter().map(|iv| iv.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) {
            break;
        }
        let (worst, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gauss_kronrod_15(&mut f, lo, mid);
        let (v2, e2) = gauss_kronrod_15(&mut f, mid, hi);
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
    // Sum in position order so the result does not depend on split history.
    intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
    intervals.iter().map(|iv| iv.2).sum()
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_section(|x| (x - 0.3).powi(2) + 1.0, -2.0, 5.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-6, "{x}");
        assert!((fx - 1.0).abs() < 1e-14);
    }

    #[test]
    fn golden_reports_boundary_minimum() {
        let (x, _) = golden_section(|x| x, 1.0, 2.0, 1e-10);
        assert_eq!(x, 1.0);
    }

    #[test]
    fn minimize_log_spans_decades() {
        let (x, _) = minimize_log(|x| (x.ln() - 1e-3f64.ln()).powi(2), 1e-9, 1e3, 60, 1e-12);
        assert!((x / 1e-3 - 1.0).abs() < 1e-5);
    }

    #[test]
    fn bisect_root_of_cubic() {
        let r = bisect_root(|x| x * x * x - 2.0, 0.0, 2.0, 1e-13);
        assert!((r - 2f64.cbrt()).abs() < 1e-12);
    }

    #[test]
    fn boundary_is_on_true_side() {
        let x = bisect_boundary(|x| x >= 0.25, 0.0, 1.0, 1e-9);
        assert!(x >= 0.25 && x - 0.25 < 1e-9);
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        let v = integrate(|x| (-x).exp(), 0.0, 40.0, 1e-14, 1e-12);
        assert!((v - (1.0 - (-40f64).exp())).abs() < 1e-12);
        let v = integrate(|x| x.sqrt(), 0.0, 1.0, 1e-13, 1e-11);
        assert!((v - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn grid_refinement_locates_interior_minimum() {
        let m = refine_log_grid_2d(
            |x, y| (x.ln() - 2f64.ln()).powi(2) + (y.ln() - 0.01f64.ln()).powi(2),
            (1e-3, 1e3),
            (1e-6, 1.0),
            3,
            64,
        );
        assert!((m.x / 2.0 - 1.0).abs() < 0.01);
        assert!((m.y / 0.01 - 1.0).abs() < 0.01);
    }

    #[test]
    fn normal_cdf_reference_points() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        let v = normal_cdf(1.959_963_984_540_054);
        assert!((v - 0.975).abs() < 1e-11, "{v}");
    }
}
