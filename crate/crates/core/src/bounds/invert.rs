use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    bnsssu_width, dfhprr_width, discretization_width, gaussian_width_rzcw, sample_split_width, thresholdout_width,
    xr17_width, BoundParams, NoiseFamily, WidthResult,
};
use crate::error::{Error, Result};

/// The width bounds that can be evaluated from [`BoundParams`] alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    Rzcw,
    Xr17,
    DfhprrLaplace,
    DfhprrGaussian,
    BnsssuLaplace,
    BnsssuGaussian,
    Thresholdout,
    SampleSplit,
    Discretization,
}

impl BoundName {
    pub const ALL: [BoundName; 9] = [
        BoundName::Rzcw,
        BoundName::Xr17,
        BoundName::DfhprrLaplace,
        BoundName::DfhprrGaussian,
        BoundName::BnsssuLaplace,
        BoundName::BnsssuGaussian,
        BoundName::Thresholdout,
        BoundName::SampleSplit,
        BoundName::Discretization,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BoundName::Rzcw => "rzcw",
            BoundName::Xr17 => "xr17",
            BoundName::DfhprrLaplace => "dfhprr_laplace",
            BoundName::DfhprrGaussian => "dfhprr_gaussian",
            BoundName::BnsssuLaplace => "bnsssu_laplace",
            BoundName::BnsssuGaussian => "bnsssu_gaussian",
            BoundName::Thresholdout => "thresholdout",
            BoundName::SampleSplit => "sample_split",
            BoundName::Discretization => "discretization",
        }
    }

    pub fn evaluate(&self, p: &BoundParams) -> Result<WidthResult> {
        match self {
            BoundName::Rzcw => gaussian_width_rzcw(p),
            BoundName::Xr17 => xr17_width(p),
            BoundName::DfhprrLaplace => dfhprr_width(NoiseFamily::Laplace, p),
            BoundName::DfhprrGaussian => dfhprr_width(NoiseFamily::Gaussian, p),
            BoundName::BnsssuLaplace => bnsssu_width(NoiseFamily::Laplace, p),
            BoundName::BnsssuGaussian => bnsssu_width(NoiseFamily::Gaussian, p),
            BoundName::Thresholdout => thresholdout_width(p),
            BoundName::SampleSplit => sample_split_width(p).map(WidthResult::new),
            BoundName::Discretization => discretization_width(p),
        }
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundName::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = BoundName::ALL.iter().map(|b| b.as_str()).collect();
                Error::Config(format!("unknown bound '{s}', expected one of {}", names.join(", ")))
            })
    }
}

/// Largest `k ≤ cap` with `bound(n, k, β) ≤ τ`, assuming the width is
/// nondecreasing in `k`. Returns 0 when even `k = 1` is too wide.
pub fn max_k(bound: BoundName, template: &BoundParams, tau: f64, cap: usize) -> Result<usize> {
    let fits = |k: usize| -> Result<bool> {
        let p = BoundParams { k, ..*template };
        Ok(bound.evaluate(&p)?.tau <= tau)
    };
    if !fits(1)? {
        return Ok(0);
    }
    let mut lo = 1usize;
    let mut hi = 2usize;
    while hi <= cap && fits(hi)? {
        lo = hi;
        hi = hi.saturating_mul(2);
    }
    if hi > cap {
        if fits(cap)? {
            return Ok(cap);
        }
        hi = cap;
    }
    // fits(lo) holds, fits(hi) fails.
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
