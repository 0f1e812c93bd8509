//! Parallel Monte Carlo trial runner and per-experiment summaries.
//!
//! Trials are scheduled dynamically over a work queue but stored by trial
//! index, and every trial draws from its own RNG stream, so reports are
//! byte-identical for a fixed master seed regardless of thread count.

use rayon::prelude::*;

use treeperc_core::generate::FamilySpec;
use treeperc_core::isolation::isolate_root;
use treeperc_core::percolation::{cluster_sizes, percolate, regime_p};
use treeperc_core::stats::{
    bucket_tail, chi_cdf, chi_mean, chi_square_test, empirical_moment, exponential_cdf, ks_test,
    ks_two_sample, normal_two_sided_p, spacing_transform, theta_recursive, theta_scale_free,
    PoissonLimitRef, SummaryStats,
};
use treeperc_core::tree::{depths, reduced_length, Tree, Vertex};

use crate::config::{ConfigError, Experiment, ExperimentConfig};
use crate::rng::derive_trial_rng;

use rand::Rng;

/// One trial's recorded values, in the order of [`Report::trial_columns`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRow {
    pub trial: u64,
    pub values: Vec<f64>,
}

/// The full outcome of an experiment: raw per-trial samples plus the
/// summary statistics confronting them with the reference laws.
#[derive(Debug, Clone)]
pub struct Report {
    pub config: ExperimentConfig,
    /// Resolved edge count (derived from `d`, `h` for d-ary trees).
    pub n: usize,
    pub trial_columns: Vec<String>,
    pub trials: Vec<TrialRow>,
    pub summaries: Vec<SummaryStats>,
}

/// Validates the configuration, runs all trials in parallel, and summarizes.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Report, ConfigError> {
    config.validate()?;
    let n = config.family.edge_count()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(resolve_threads(config.threads))
        .build()
        .expect("failed to build worker pool");
    let (trial_columns, trials) = pool.install(|| collect_trials(config, n));
    let summaries = summarize(config, n, &trials);
    Ok(Report {
        config: config.clone(),
        n,
        trial_columns,
        trials,
        summaries,
    })
}

/// Explicit count, else `TREEPERC_THREADS`, else one worker per CPU
/// (0 lets the pool builder pick).
fn resolve_threads(configured: Option<usize>) -> usize {
    configured
        .or_else(|| {
            std::env::var("TREEPERC_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0)
}

fn run_parallel<F>(trials: usize, per_trial: F) -> Vec<TrialRow>
where
    F: Fn(u64) -> Vec<f64> + Sync,
{
    (0..trials as u64)
        .into_par_iter()
        .map(|trial| TrialRow {
            trial,
            values: per_trial(trial),
        })
        .collect()
}

fn sample_tree(family: &FamilySpec, rng: &mut impl Rng) -> Tree {
    family.sample(rng).expect("family parameters were validated")
}

fn collect_trials(config: &ExperimentConfig, n: usize) -> (Vec<String>, Vec<TrialRow>) {
    let seed = config.master_seed;
    let family = config.family;
    match config.experiment {
        Experiment::Moments => {
            let p = percolation_parameter(config, n);
            let k = config.k;
            let rows = run_parallel(config.trials, |trial| {
                let mut rng = derive_trial_rng(seed, trial);
                let tree = sample_tree(&family, &mut rng);
                let mask = percolate(&tree, p, &mut rng);
                let c0 = cluster_sizes(&tree, &mask).root_cluster_size;
                let lhs = (c0 as f64 / (n + 1) as f64).powi(k as i32);
                let targets: Vec<Vertex> =
                    (0..k).map(|_| rng.gen_range(0..=n as Vertex)).collect();
                let length = reduced_length(&tree, &targets).expect("targets in range");
                vec![lhs, p.powi(length as i32)]
            });
            (
                vec!["root_moment".into(), "length_moment".into()],
                rows,
            )
        }
        Experiment::Giant => {
            let p = percolation_parameter(config, n);
            let rows = run_parallel(config.trials, |trial| {
                let mut rng = derive_trial_rng(seed, trial);
                let tree = sample_tree(&family, &mut rng);
                let mask = percolate(&tree, p, &mut rng);
                let c0 = cluster_sizes(&tree, &mask).root_cluster_size;
                vec![c0 as f64 / n as f64]
            });
            (vec!["root_frac".into()], rows)
        }
        Experiment::AlmostGiant => {
            let p = percolation_parameter(config, n);
            let j = config.j as usize;
            let rescale = (n as f64).ln() / n as f64;
            let rows = run_parallel(config.trials, |trial| {
                let mut rng = derive_trial_rng(seed, trial);
                let tree = sample_tree(&family, &mut rng);
                let mask = percolate(&tree, p, &mut rng);
                let out = cluster_sizes(&tree, &mask);
                (0..j)
                    .map(|r| match out.ranked_sizes.get(r) {
                        Some(&c) => rescale * c as f64,
                        None => f64::NAN,
                    })
                    .collect()
            });
            let columns = (1..=j).map(|r| format!("x{r}")).collect();
            (columns, rows)
        }
        Experiment::Hk => {
            let k = config.k;
            let ell = family.scale().eval(n);
            let rows = run_parallel(config.trials, |trial| {
                let mut rng = derive_trial_rng(seed, trial);
                let tree = sample_tree(&family, &mut rng);
                let draw = k.max(2) as usize;
                let targets: Vec<Vertex> =
                    (0..draw).map(|_| rng.gen_range(0..=n as Vertex)).collect();
                let l1 = reduced_length(&tree, &targets[..1]).expect("targets in range");
                let l2 = reduced_length(&tree, &targets[..2]).expect("targets in range");
                let lk = match k {
                    1 => l1,
                    2 => l2,
                    _ => reduced_length(&tree, &targets[..k as usize])
                        .expect("targets in range"),
                };
                vec![
                    lk as f64 / ell,
                    l1 as f64 / ell,
                    (l2 - l1) as f64 / ell,
                ]
            });
            (
                vec![
                    "lk_scaled".into(),
                    "l1_scaled".into(),
                    "l2_minus_l1_scaled".into(),
                ],
                rows,
            )
        }
        Experiment::Eta => {
            let rows = run_parallel(config.trials, |trial| {
                let mut rng = derive_trial_rng(seed, trial);
                let tree = sample_tree(&family, &mut rng);
                let trace = isolate_root(&tree, &mut rng);
                vec![trace.frozen_sizes[0] as f64]
            });
            (vec!["first_frozen".into()], rows)
        }
        Experiment::Kappa => {
            let p = percolation_parameter(config, n);
            // The tree is deterministic; build it and its depth table once.
            let tree = sample_tree(&family, &mut derive_trial_rng(seed, 0));
            let table = depths(&tree);
            let h = match family {
                FamilySpec::Dary { h, .. } => h,
                _ => unreachable!("validated: kappa runs on d-ary trees"),
            };
            let rows = run_parallel(config.trials, |trial| {
                let mut rng = derive_trial_rng(seed, trial);
                let mask = percolate(&tree, p, &mut rng);
                // Height of an edge is the depth of its lower endpoint;
                // h + 1 encodes "no edge removed".
                let mut kappa = h + 1;
                for (v, &kept) in mask.kept().iter().enumerate() {
                    if !kept {
                        kappa = kappa.min(table.get(v as Vertex + 1));
                    }
                }
                vec![kappa as f64]
            });
            (vec!["kappa".into()], rows)
        }
    }
}

fn percolation_parameter(config: &ExperimentConfig, n: usize) -> f64 {
    regime_p(n, config.c, config.family.scale()).expect("regime was validated")
}

fn column(trials: &[TrialRow], idx: usize) -> Vec<f64> {
    trials.iter().map(|row| row.values[idx]).collect()
}

fn mean_against_theory(
    name: &'static str,
    samples: &[f64],
    theory: f64,
) -> SummaryStats {
    let (mean, se) = empirical_moment(samples, 1).expect("at least one trial");
    let diff = mean - theory;
    let z = if se > 0.0 {
        diff / se
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY * diff.signum()
    };
    SummaryStats {
        test_name: name,
        estimate: mean,
        std_error: se,
        theory,
        statistic: z,
        p_value: normal_two_sided_p(z),
        n_samples: samples.len(),
    }
}

fn summarize(config: &ExperimentConfig, n: usize, trials: &[TrialRow]) -> Vec<SummaryStats> {
    let mut rows = Vec::new();
    match config.experiment {
        Experiment::Moments => {
            let lhs = column(trials, 0);
            let rhs = column(trials, 1);
            let (ml, sl) = empirical_moment(&lhs, 1).expect("trials >= 1");
            let (mr, sr) = empirical_moment(&rhs, 1).expect("trials >= 1");
            let se = (sl * sl + sr * sr).sqrt();
            let diff = ml - mr;
            let z = if se > 0.0 {
                diff / se
            } else if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY * diff.signum()
            };
            rows.push(SummaryStats {
                test_name: "moment_identity_z",
                estimate: ml,
                std_error: se,
                theory: mr,
                statistic: z,
                p_value: normal_two_sided_p(z),
                n_samples: trials.len(),
            });
        }
        Experiment::Giant => {
            let theory = match config.family {
                FamilySpec::Recursive { .. } => theta_recursive(config.c),
                FamilySpec::ScaleFree { beta, .. } => theta_scale_free(config.c, beta),
                _ => unreachable!("validated: giant runs on recursive or scalefree"),
            };
            rows.push(mean_against_theory(
                "giant_mean_vs_theta",
                &column(trials, 0),
                theory,
            ));
        }
        Experiment::AlmostGiant => {
            if config.c == 0.0 {
                // No edges are removed and the limit law is undefined.
                return rows;
            }
            let limit = match config.family {
                FamilySpec::Recursive { .. } => PoissonLimitRef::recursive(config.c),
                FamilySpec::ScaleFree { beta, .. } => {
                    PoissonLimitRef::scale_free(config.c, beta)
                }
                _ => unreachable!("validated: almost_giant runs on recursive or scalefree"),
            };
            let x1: Vec<f64> = column(trials, 0)
                .into_iter()
                .filter(|x| x.is_finite())
                .collect();
            let inv_x1: Vec<f64> = x1.iter().map(|x| 1.0 / x).collect();
            if let Ok(mut s) = ks_test(&inv_x1, |y| limit.inv_x1_cdf(y)) {
                s.test_name = "ks_inv_x1_exponential";
                s.theory = limit.rate;
                rows.push(s);
            }
            let mut pool = Vec::new();
            for row in trials {
                let prefix: Vec<f64> = row
                    .values
                    .iter()
                    .copied()
                    .take_while(|x| x.is_finite())
                    .collect();
                if !prefix.is_empty() {
                    pool.extend(
                        spacing_transform(&prefix).expect("ranked sizes are positive"),
                    );
                }
            }
            if let Ok(mut s) = ks_test(&pool, |y| exponential_cdf(limit.rate, y)) {
                s.test_name = "ks_spacings_exponential";
                s.theory = limit.rate;
                rows.push(s);
            }
            if !x1.is_empty() {
                let mut sorted = x1.clone();
                sorted.sort_unstable_by(f64::total_cmp);
                let median = if sorted.len() % 2 == 1 {
                    sorted[sorted.len() / 2]
                } else {
                    0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
                };
                let theory = limit.median_x1();
                let below = sorted.iter().filter(|&&x| x <= theory).count() as f64;
                let m = sorted.len() as f64;
                let z = (below - 0.5 * m) / (0.25 * m).sqrt();
                rows.push(SummaryStats {
                    test_name: "median_x1_sign",
                    estimate: median,
                    std_error: 0.0,
                    theory,
                    statistic: z,
                    p_value: normal_two_sided_p(z),
                    n_samples: sorted.len(),
                });
            }
        }
        Experiment::Hk => {
            let k = config.k;
            let theory = match config.family {
                FamilySpec::Recursive { .. } => k as f64,
                FamilySpec::ScaleFree { beta, .. } => {
                    k as f64 * (1.0 + beta) / (2.0 + beta)
                }
                FamilySpec::Cayley { .. } => chi_mean(2 * k),
                FamilySpec::Dary { d, .. } => k as f64 / (d as f64).ln(),
                FamilySpec::Star { .. } => k as f64 * 0.5,
            };
            rows.push(mean_against_theory(
                "hk_mean_vs_limit",
                &column(trials, 0),
                theory,
            ));
            if matches!(config.family, FamilySpec::Cayley { .. }) {
                if let Ok(mut s) = ks_test(&column(trials, 0), |x| chi_cdf(2 * k, x)) {
                    s.test_name = "ks_chi_2k";
                    s.theory = theory;
                    rows.push(s);
                }
            }
            if let Ok(mut s) = ks_two_sample(&column(trials, 2), &column(trials, 1)) {
                s.test_name = "ks2_l2_minus_l1_vs_l1";
                rows.push(s);
            }
        }
        Experiment::Eta => {
            let firsts = column(trials, 0);
            // E[eta | eta <= n] = (n+1)/n * (H_{n+1} - 1).
            let harmonic: f64 = (1..=n + 1).map(|i| 1.0 / i as f64).sum();
            let theory = (n as f64 + 1.0) / n as f64 * (harmonic - 1.0);
            rows.push(mean_against_theory("eta_first_cut_mean", &firsts, theory));

            let cutoff = 10.min(n - 1) as u64;
            let mut counts = vec![0u64; cutoff as usize + 1];
            for &x in &firsts {
                let v = x as u64;
                if v > cutoff {
                    counts[cutoff as usize] += 1;
                } else {
                    counts[v as usize - 1] += 1;
                }
            }
            let mut probs: Vec<f64> = (1..=cutoff)
                .map(|jj| {
                    (n as f64 + 1.0) / (n as f64 * jj as f64 * (jj as f64 + 1.0))
                })
                .collect();
            probs.push(1.0 - probs.iter().sum::<f64>());
            if let Ok(mut s) = chi_square_test(&counts, &probs) {
                s.test_name = "eta_first_cut_chi2";
                rows.push(s);
            }
        }
        Experiment::Kappa => {
            let (d, h) = match config.family {
                FamilySpec::Dary { d, h } => (d, h),
                _ => unreachable!("validated: kappa runs on d-ary trees"),
            };
            let p = percolation_parameter(config, n);
            let values = column(trials, 0);
            // E[min(kappa, h+1)] = 1 + sum of the survival probabilities.
            let mut theory = 1.0;
            for jj in 1..=h {
                theory += treeperc_core::stats::kappa_survival(d, h, jj, p);
            }
            rows.push(mean_against_theory("kappa_mean", &values, theory));

            let mut counts = vec![0u64; h as usize + 1];
            for &x in &values {
                counts[x as usize - 1] += 1;
            }
            let mut probs = Vec::with_capacity(h as usize + 1);
            let mut survival = 1.0;
            for jj in 1..=h {
                let s = treeperc_core::stats::kappa_survival(d, h, jj, p);
                probs.push(survival - s);
                survival = s;
            }
            probs.push(survival);
            let (counts, probs) = bucket_tail(counts, probs, 5.0);
            if let Ok(mut s) = chi_square_test(&counts, &probs) {
                s.test_name = "kappa_chi2";
                rows.push(s);
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::OutFormat;

    fn config(experiment: Experiment, family: FamilySpec, trials: usize) -> ExperimentConfig {
        ExperimentConfig {
            experiment,
            family,
            c: 1.0,
            k: 1,
            j: 2,
            trials,
            master_seed: 7,
            threads: Some(2),
            out_format: OutFormat::Csv,
            out_path: None,
        }
    }

    #[test]
    fn giant_with_c_zero_keeps_everything() {
        let mut cfg = config(Experiment::Giant, FamilySpec::Recursive { n: 500 }, 20);
        cfg.c = 0.0;
        let report = run_experiment(&cfg).unwrap();
        for row in &report.trials {
            assert_eq!(row.values[0], 501.0 / 500.0);
        }
        let s = &report.summaries[0];
        assert_eq!(s.test_name, "giant_mean_vs_theta");
        assert!((s.estimate - 1.002).abs() < 1e-12);
        assert!((s.theory - 1.0).abs() < 1e-12);
    }

    #[test]
    fn moments_report_shape() {
        let cfg = config(Experiment::Moments, FamilySpec::Recursive { n: 200 }, 50);
        let report = run_experiment(&cfg).unwrap();
        assert_eq!(report.trial_columns, vec!["root_moment", "length_moment"]);
        assert_eq!(report.trials.len(), 50);
        assert_eq!(report.summaries.len(), 1);
        // Trials come back ordered by index whatever the scheduling.
        for (i, row) in report.trials.iter().enumerate() {
            assert_eq!(row.trial, i as u64);
        }
    }

    #[test]
    fn almost_giant_pads_missing_ranks_with_nan() {
        // c = 0 keeps every edge, so there are no non-root clusters at all.
        let mut cfg = config(
            Experiment::AlmostGiant,
            FamilySpec::Recursive { n: 100 },
            12,
        );
        cfg.c = 0.0;
        let report = run_experiment(&cfg).unwrap();
        assert_eq!(report.trial_columns, vec!["x1", "x2"]);
        for row in &report.trials {
            assert!(row.values.iter().all(|v| v.is_nan()));
        }
        // No finite samples, so no KS or median summaries are emitted.
        assert!(report.summaries.is_empty());
    }

    #[test]
    fn hk_records_all_three_columns() {
        let cfg = config(Experiment::Hk, FamilySpec::Recursive { n: 300 }, 40);
        let report = run_experiment(&cfg).unwrap();
        assert_eq!(report.trials[0].values.len(), 3);
        let names: Vec<_> = report.summaries.iter().map(|s| s.test_name).collect();
        assert!(names.contains(&"hk_mean_vs_limit"));
        assert!(names.contains(&"ks2_l2_minus_l1_vs_l1"));
    }

    #[test]
    fn kappa_counts_lowest_removed_height() {
        let cfg = config(Experiment::Kappa, FamilySpec::Dary { d: 2, h: 6 }, 200);
        let report = run_experiment(&cfg).unwrap();
        for row in &report.trials {
            let v = row.values[0];
            assert!(v >= 1.0 && v <= 7.0);
        }
        let names: Vec<_> = report.summaries.iter().map(|s| s.test_name).collect();
        assert!(names.contains(&"kappa_mean"));
    }

    #[test]
    fn eta_summary_shapes() {
        let cfg = config(Experiment::Eta, FamilySpec::Recursive { n: 100 }, 3000);
        let report = run_experiment(&cfg).unwrap();
        let names: Vec<_> = report.summaries.iter().map(|s| s.test_name).collect();
        assert_eq!(names, vec!["eta_first_cut_mean", "eta_first_cut_chi2"]);
        let chi = &report.summaries[1];
        assert!(chi.p_value > 1e-6, "p = {}", chi.p_value);
    }
}
