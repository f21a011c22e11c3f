use super::lambda::min_lambda_objective;
use super::laplace_max::laplace_max_moments;
use super::{BoundParams, WidthResult};
use crate::error::{Error, Result};

struct Ingredients {
    t2_plus_psi: f64,
    xi: f64,
    h: f64,
}

fn ingredients(p: &BoundParams) -> Result<Ingredients> {
    p.validate()?;
    let missing = |what: &str| Error::InvalidParameter(format!("Thresholdout bound needs {what}"));
    let sigma = p.sigma.ok_or_else(|| missing("σ > 0"))?;
    let t = p.threshold.ok_or_else(|| missing("a threshold"))?;
    let h = p.holdout.ok_or_else(|| missing("a holdout size"))? as f64;
    let b = p.budget.ok_or_else(|| missing("a holdout budget"))?;
    let (mw, sw) = laplace_max_moments(4.0 * sigma, p.k);
    let (my, sy) = laplace_max_moments(2.0 * sigma, b);
    // max W and max Y are independent.
    let mean = mw + my;
    let second = sw + 2.0 * mw * my + sy;
    let psi = second + 2.0 * t * mean;
    let (xi, _) = min_lambda_objective(2.0 * b as f64 / (sigma * sigma * h));
    Ok(Ingredients {
        t2_plus_psi: t * t + psi,
        xi,
        h,
    })
}

fn mse(p: &BoundParams) -> Result<f64> {
    let g = ingredients(p)?;
    Ok(g.t2_plus_psi + g.xi / (4.0 * g.h) + (g.xi / g.h * g.t2_plus_psi).sqrt())
}

/// RMSE upper bound for Thresholdout; needs σ, threshold, holdout size and
/// budget in `p`.
pub fn thresholdout_rmse_bound(p: &BoundParams) -> Result<f64> {
    Ok(mse(p)?.sqrt())
}

/// Worst-case width for Thresholdout, `√(MSE bound / β)`.
pub fn thresholdout_width(p: &BoundParams) -> Result<WidthResult> {
    Ok(WidthResult::new((mse(p)? / p.beta).sqrt()))
}
