//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use adax::adversary::StrategyKind;
use adax::bounds::{
    advanced_composition, bnsssu_width, dfhprr_width, gaussian_width_rzcw, laplace_max_moments, max_k,
    min_lambda_objective, zcdp_to_dp, BoundName, BoundParams, NoiseFamily,
};
use adax::harness::figures::{gnc_count_config, gnc_spec};
use adax::harness::{
    audit_coverage, miss_rate, queries_answered, read_csv, rmse_experiment, run_experiment, sim_rows, write_csv,
    DistributionSpec, ExperimentConfig, GncSpec, GuessSpec, MechanismSpec, RmseConfig, RmseMechanism, SimRow,
    StrategySpec, WidthSchedule,
};
use adax::mechanisms::tolerance::{holdout_tol_mgf, ln_mgf_bound, mgf_ell};
use adax::mechanisms::{beta_budget, holdout_tol_chernoff, TolKind};
use common::*;
use num::{BigRational, Zero};

const SEED: u64 = 20_240_601;
const CAP: usize = 100_000_000;

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: u32, name: &str, pass: bool, detail: String, elapsed: Duration) {
        if !pass {
            self.failed += 1;
        }
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("{tag} {id:>2} {name}: {detail} [{:.1}s]", elapsed.as_secs_f64());
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn bound_ordering() -> (bool, String) {
    let others = [
        BoundName::BnsssuLaplace,
        BoundName::BnsssuGaussian,
        BoundName::DfhprrLaplace,
        BoundName::DfhprrGaussian,
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [1_000usize, 10_000, 100_000, 1_000_000] {
        let p = BoundParams::new(n, 1, 0.05);
        let rz = max_k(BoundName::Rzcw, &p, 0.1, CAP).unwrap();
        let best_other = others.iter().map(|&b| max_k(b, &p, 0.1, CAP).unwrap()).max().unwrap();
        ok &= rz >= best_other;
        parts.push(format!("n={n}: rzcw {rz} vs {best_other}"));
    }
    (ok, parts.join("; "))
}

fn rmse_ratios(mechanism: RmseMechanism) -> Vec<(f64, f64)> {
    let cfg = RmseConfig {
        mechanism,
        n: 5_000,
        ks: vec![1_000, 10_000],
        runs: 20,
        seed: SEED,
    };
    rmse_experiment(&cfg)
        .unwrap()
        .iter()
        .map(|p| {
            let upper = p.row.upper_bound_rmse.unwrap();
            (upper / p.row.realized_rmse_mean, upper / p.adaptive_rmse)
        })
        .collect()
}

fn gnc_coverage() -> (bool, String) {
    let (beta, runs) = (0.2, 2_000);
    let spec = GncSpec {
        guess: GuessSpec::Gaussian { rho: 1e-2 },
        guess_rows: 200,
        tol: TolKind::Chernoff,
        schedule: WidthSchedule::Fixed { tau: 0.3 },
    };
    let strategy = StrategySpec {
        kind: StrategyKind::QuadraticAdaptive,
        k: 30,
        agreement_mode: true,
        clamp_eps: None,
    };
    let mut cfg = ExperimentConfig::new(MechanismSpec::GuessAndCheck(spec), strategy, 400);
    cfg.beta = beta;
    cfg.runs = runs;
    cfg.seed = SEED;
    let outcomes = run_experiment(&cfg).unwrap();
    let miss = miss_rate(&outcomes);
    let limit = beta + 3.0 * (beta * (1.0 - beta) / runs as f64).sqrt();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("coverage.csv");
    write_csv(&path, &sim_rows(&outcomes)).unwrap();
    let audit = audit_coverage(&read_csv::<SimRow>(&path).unwrap());
    let failures: usize = outcomes.iter().map(|o| o.failures).sum();
    (
        miss <= limit && audit == Some(miss),
        format!("miss rate {miss:.4} ≤ {limit:.4}, CSV audit {audit:?}, {failures} failed checks over {runs} runs"),
    )
}

/// Σ over every node of the k = 3 transcript tree of `β_node / (β(6/π²)²)`,
/// maximized over the analyst's choice of γ at each failure.
fn tree_sum(i: usize, k: usize, gammas: &mut Vec<BigRational>, mismatches: &mut usize) -> BigRational {
    let f = gammas.len();
    let mut choose = BigRational::from_integer(1.into());
    for j in 0..f {
        choose *= rational((i - 1 - j) as i64, (j + 1) as i64);
    }
    let gamma_prod = gammas.iter().fold(BigRational::from_integer(1.into()), |acc, g| acc * g);
    let r = gamma_prod / (choose * rational(((i * i) * (f + 1) * (f + 1)) as i64, 1));

    let c0 = (6.0 / std::f64::consts::PI.powi(2)).powi(2);
    let g64: Vec<f64> = gammas.iter().map(|g| num::ToPrimitive::to_f64(g).unwrap()).collect();
    let lib = beta_budget(i, &g64, 0.1);
    if rel(lib, 0.1 * c0 * num::ToPrimitive::to_f64(&r).unwrap()) > 1e-12 {
        *mismatches += 1;
    }
    if i == k {
        return r;
    }
    let pass = tree_sum(i + 1, k, gammas, mismatches);
    let mut worst_fail = BigRational::zero();
    for inv in [2i64, 3] {
        gammas.push(rational(1, inv));
        // One child per grid value of the released holdout answer.
        let mut s = BigRational::zero();
        for _ in 0..inv {
            s += tree_sum(i + 1, k, gammas, mismatches);
        }
        gammas.pop();
        worst_fail = worst_fail.max(s);
    }
    r + pass + worst_fail
}

fn budget_soundness() -> (bool, String) {
    let mut mismatches = 0;
    let total = tree_sum(1, 3, &mut Vec::new(), &mut mismatches);
    // Closed form of the sum: Σ_{i≤3} Σ_{f<i} 1/(i²(f+1)²).
    let mut closed = BigRational::zero();
    for i in 1..=3i64 {
        for f in 0..i {
            closed += rational(1, i * i * (f + 1) * (f + 1));
        }
    }
    // (1.6449)² < (π²/6)².
    let ceiling = rational(16_449 * 16_449, 100_000_000);
    let ok = total <= ceiling && total == closed && mismatches == 0;
    (
        ok,
        format!("Σβ_node/β = (6/π²)²·{total} ≤ (6/π²)²·{ceiling} < 1, per-node library mismatches {mismatches}"),
    )
}

fn mgf_dominance() -> (bool, String) {
    let mut checked = 0usize;
    let mut violations = 0usize;
    for n in 1..=60u64 {
        for a in 1..20i64 {
            let p = rational(a, 20);
            let mu = a as f64 / 20.0;
            let tails = binomial_upper_tails(n, &p);
            for j in 0..=n {
                let q = j as f64 / n as f64;
                if q <= mu {
                    continue;
                }
                checked += 1;
                let bound = ln_mgf_bound(n as usize, mu, q, mgf_ell(mu, q)).exp();
                if !le_with_slack(&tails[j as usize], bound, 1e-12) {
                    violations += 1;
                }
            }
            // The tolerance solver at this mean.
            for beta_i in [0.2, 0.01] {
                let tau = 0.3;
                let a_g = mu + tau;
                if a_g > 1.0 {
                    continue;
                }
                if let Some(t) = holdout_tol_mgf(beta_i, a_g, tau, 0.0, n as usize) {
                    checked += 1;
                    let mu_f = a_g - tau;
                    let tails = binomial_upper_tails(n, &exact(mu_f));
                    let j = ((mu_f + t) * n as f64).ceil() as usize;
                    let tail = tails.get(j).cloned().unwrap_or_else(BigRational::zero);
                    if !le_with_slack(&tail, beta_i / 2.0, 1e-9) {
                        violations += 1;
                    }
                }
            }
        }
    }
    let mgf = holdout_tol_mgf(0.01, 0.9, 0.05, 0.85, 2_000).unwrap();
    let ch = holdout_tol_chernoff(0.01, 2_000);
    (
        violations == 0 && mgf < ch,
        format!("{checked} exact tails, {violations} above the bound; MGF width {mgf:.5} < Chernoff {ch:.5}"),
    )
}

fn gnc_count(n: usize, tau: f64, beta: f64, tol: TolKind, distribution: DistributionSpec) -> f64 {
    let spec = gnc_spec(n, GuessSpec::Gaussian { rho: 1e-2 }, tol, WidthSchedule::Fixed { tau });
    let mut cfg = gnc_count_config(n, tau, beta, 5_000, spec);
    cfg.distribution = distribution;
    cfg.runs = 5;
    cfg.seed = SEED;
    cfg.truth_samples = 20_000;
    queries_answered(&cfg).unwrap().k_mean
}

fn numerical_oracles() -> (bool, String) {
    let mut worst = Vec::new();
    let lambda = [1.0, 10.0, 1000.0]
        .iter()
        .map(|&b| rel(min_lambda_objective(b).0, lambda_grid(b)))
        .fold(0.0, f64::max);
    worst.push(("min_lambda", lambda, 1e-6));
    let rz = [(10_000usize, 100usize), (1_000_000, 10_000)]
        .iter()
        .map(|&(n, k)| {
            let lib = gaussian_width_rzcw(&BoundParams::new(n, k, 0.05)).unwrap().tau;
            rel(lib, rzcw_oracle(n as f64, k as f64, 0.05))
        })
        .fold(0.0, f64::max);
    worst.push(("rzcw", rz, 1e-4));
    let pb = BoundParams::new(1_000_000, 10_000, 0.05);
    let bn = rel(bnsssu_width(NoiseFamily::Laplace, &pb).unwrap().tau, bnsssu_laplace_oracle(1e6, 1e4, 0.05)).max(rel(
        bnsssu_width(NoiseFamily::Gaussian, &pb).unwrap().tau,
        bnsssu_gaussian_oracle(1e6, 1e4, 0.05),
    ));
    worst.push(("bnsssu", bn, 1e-3));
    let pd = BoundParams::new(100_000, 100, 0.05);
    let df = rel(dfhprr_width(NoiseFamily::Laplace, &pd).unwrap().tau, dfhprr_laplace_oracle(1e5, 100.0, 0.05)).max(rel(
        dfhprr_width(NoiseFamily::Gaussian, &pd).unwrap().tau,
        dfhprr_gaussian_oracle(1e5, 100.0, 0.05),
    ));
    worst.push(("dfhprr", df, 1e-3));
    worst.push(("laplace_max_mean", (laplace_max_moments(1.0, 2).0 - 0.75).abs(), 1e-4));
    worst.push(("advanced_composition", (advanced_composition(0.1, 100.0, 1e-6) - 5.756_105_519_335_732).abs(), 1e-9));
    worst.push(("zcdp_to_dp", (zcdp_to_dp(0.01, 1e-5) - 0.635_546_331_294_521_6).abs(), 1e-9));
    let ok = worst.iter().all(|(_, e, tol)| e <= tol);
    let detail = worst.iter().map(|(name, e, tol)| format!("{name} {e:.1e}≤{tol:.0e}")).collect::<Vec<_>>().join(", ");
    (ok, detail)
}

fn main() {
    let mut report = Report { failed: 0 };

    let t = Instant::now();
    let (ok, detail) = bound_ordering();
    let el = t.elapsed();
    report.line(1, "bound ordering at τ=0.1, β=0.05 (< 60 s)", ok && el.as_secs() < 60, detail, el);

    let t = Instant::now();
    let gauss = rmse_ratios(RmseMechanism::Gaussian);
    let el = t.elapsed();
    let ok = gauss.iter().all(|&(r, _)| (1.0..=3.0).contains(&r)) && el.as_secs() < 600;
    let detail = format!(
        "upper/realized {:.3} (k=10³), {:.3} (k=10⁴) in [1, 3]; adaptive-query-only {:.3}, {:.3}",
        gauss[0].0, gauss[1].0, gauss[0].1, gauss[1].1
    );
    report.line(2, "Gaussian RMSE tightness, n=5000, R=20 (< 600 s)", ok, detail, el);

    let t = Instant::now();
    let thr = rmse_ratios(RmseMechanism::Thresholdout);
    let el = t.elapsed();
    let ok = thr[1].0 >= 2.0 * gauss[1].0;
    let detail = format!(
        "Thresholdout ratio {:.3} ≥ 2 × Gaussian {:.3} at k=10⁴ (k=10³: {:.3}; adaptive-only {:.3})",
        thr[1].0, gauss[1].0, thr[0].0, thr[1].1
    );
    report.line(3, "Thresholdout gap", ok, detail, el);

    let t = Instant::now();
    let (ok, detail) = gnc_coverage();
    let el = t.elapsed();
    report.line(4, "GnC coverage, 2000 runs, n=400, k=30, β=0.2 (< 300 s)", ok && el.as_secs() < 300, detail, el);

    let t = Instant::now();
    let (ok, detail) = budget_soundness();
    report.line(5, "budget soundness, k=3 tree, γ ∈ {1/2, 1/3}", ok, detail, t.elapsed());

    let t = Instant::now();
    let (ok, detail) = mgf_dominance();
    report.line(6, "MGF tolerance dominance, n ≤ 60", ok, detail, t.elapsed());

    let t = Instant::now();
    let k_gnc = gnc_count(5_000, 0.1, 0.05, TolKind::Chernoff, DistributionSpec::Uniform);
    let k_rz = max_k(BoundName::Rzcw, &BoundParams::new(5_000, 1, 0.05), 0.1, CAP).unwrap();
    let el = t.elapsed();
    let ok = k_gnc >= 10.0 * k_rz as f64 && el.as_secs() < 600;
    let detail = format!("GnC k_mean {k_gnc:.1} ≥ 10 × rzcw max-k {k_rz}");
    report.line(7, "GnC beats worst case, n=5000, τ=0.1, R=5 (< 600 s)", ok, detail, el);

    let t = Instant::now();
    let mgf = gnc_count(4_000, 0.05, 0.05, TolKind::Mgf, DistributionSpec::LowVariance);
    let ch = gnc_count(4_000, 0.05, 0.05, TolKind::Chernoff, DistributionSpec::LowVariance);
    let detail = format!("k_mean MGF {mgf:.1} > Chernoff {ch:.1}");
    report.line(8, "low-variance gain, n=4000, τ=β=0.05, R=5", mgf > ch, detail, t.elapsed());

    let t = Instant::now();
    let small = gnc_count(5_000, 0.1, 0.005, TolKind::Chernoff, DistributionSpec::Uniform);
    let detail = format!("k_mean {small:.1} at β=0.005 vs {k_gnc:.1} at β=0.05, ratio {:.3} ≥ 0.5", small / k_gnc);
    report.line(9, "β-insensitivity, n=5000, R=5", small >= 0.5 * k_gnc, detail, t.elapsed());

    let t = Instant::now();
    let (ok, detail) = numerical_oracles();
    report.line(10, "numerical oracles", ok, detail, t.elapsed());

    println!("acceptance: {} of 10 criteria failed", report.failed);
    if report.failed > 0 {
        std::process::exit(1);
    }
}
