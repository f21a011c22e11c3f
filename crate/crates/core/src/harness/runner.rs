use super::config::ExperimentConfig;
use super::interaction::{run_interaction, RunOutcome};
use crate::error::Result;

/// Maps `f` over run indices `0..runs`, preserving index order. Uses rayon
/// when the `parallel` feature is on.
pub fn map_runs<T, F>(runs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..runs).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_runs_sequential(runs, f)
    }
}

pub fn map_runs_sequential<T, F>(runs: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..runs).map(f).collect()
}

/// All `cfg.runs` interactions, in run-index order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RunOutcome>> {
    cfg.validate()?;
    map_runs(cfg.runs, |r| run_interaction(cfg, r)).into_iter().collect()
}

pub fn run_experiment_sequential(cfg: &ExperimentConfig) -> Result<Vec<RunOutcome>> {
    cfg.validate()?;
    map_runs_sequential(cfg.runs, |r| run_interaction(cfg, r)).into_iter().collect()
}

/// Mean and sample standard deviation (zero for a single value).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        assert_eq!(map_runs(100, |i| i * 2), (0..100).map(|i| i * 2).collect::<Vec<_>>());
    }

    #[test]
    fn mean_std_matches_hand_values() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_std(&[7.0]), (7.0, 0.0));
    }
}
