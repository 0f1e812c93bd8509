//! Exact enumeration oracles, empirical estimators, and goodness-of-fit
//! tests confronting simulation output with the reference laws.
//!
//! The central exact statement is the moment identity: for a fixed tree
//! with `n` edges percolated at parameter `p`, and `L_k` the reduced length
//! to `k` uniform targets,
//!
//! ```text
//! E[((n+1)^-1 C0)^k] = E[p^(L_k)]
//! ```
//!
//! [`exact_moment_both_sides`] evaluates both sides by exhaustive
//! enumeration (all `2^n` masks on the left, all `(n+1)^k` target tuples on
//! the right), which is the ground truth the Monte Carlo experiments are
//! checked against.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::special;
use crate::tree::{depths, reduced_length, Tree, Vertex};

/// One test or estimate, with enough context to judge it.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats {
    /// Which test or estimator produced the record.
    pub test_name: &'static str,
    /// Point estimate (mean, median, or test statistic, depending on the test).
    pub estimate: f64,
    /// Standard error of the estimate; 0 when not applicable.
    pub std_error: f64,
    /// Theoretical reference value; NaN when no closed form applies.
    pub theory: f64,
    /// Test statistic.
    pub statistic: f64,
    /// p-value in `[0, 1]`.
    pub p_value: f64,
    /// Number of samples consumed.
    pub n_samples: usize,
}

/// The exponential rate of the inverse-size spacings in the almost-giant
/// limit: `c e^-c` for recursive trees and `c e^(-c (1+beta)/(2+beta))` for
/// scale-free trees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonLimitRef {
    pub rate: f64,
}

impl PoissonLimitRef {
    /// Limit reference for recursive trees at percolation constant `c > 0`.
    pub fn recursive(c: f64) -> Self {
        assert!(c > 0.0, "the limit law needs c > 0");
        PoissonLimitRef {
            rate: c * math::exp(-c),
        }
    }

    /// Limit reference for scale-free trees with parameter `beta > -1`.
    pub fn scale_free(c: f64, beta: f64) -> Self {
        assert!(c > 0.0, "the limit law needs c > 0");
        assert!(beta > -1.0, "beta must exceed -1");
        PoissonLimitRef {
            rate: c * math::exp(-c * (1.0 + beta) / (2.0 + beta)),
        }
    }

    /// CDF of `1/x_1`, an exponential with this rate.
    pub fn inv_x1_cdf(&self, y: f64) -> f64 {
        exponential_cdf(self.rate, y)
    }

    /// CDF of the j-th ranked atom `x_j`, distributed as the inverse of a
    /// gamma variable with shape `j` and this rate.
    pub fn xj_cdf(&self, j: u32, x: f64) -> f64 {
        assert!(j >= 1);
        if x <= 0.0 {
            return 0.0;
        }
        special::gamma_q(j as f64, self.rate / x)
    }

    /// Median of `x_1`: solving `exp(-rate / m) = 1/2` gives `rate / ln 2`.
    pub fn median_x1(&self) -> f64 {
        self.rate / core::f64::consts::LN_2
    }
}

/// Errors from the estimators and tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StatsError {
    EmptySamples,
    TooFewSamples { got: usize, need: usize },
    /// Exhaustive mask enumeration is capped at `max` edges.
    TreeTooLarge { n: usize, max: usize },
    /// Exhaustive tuple enumeration is capped at moment order `max`.
    OrderTooLarge { k: u32, max: u32 },
    /// Bucket probabilities must sum to 1 within 1e-12.
    ProbabilitiesDontSum { total: f64 },
    /// Every expected bucket count must be at least 5.
    ExpectedCountTooSmall { bucket: usize, expected: f64 },
    LengthMismatch { observed: usize, expected: usize },
    /// The reference CDF is non-monotone, out of `[0, 1]`, or flat across
    /// the whole sample.
    DegenerateCdf,
    /// Spacing input must be strictly positive.
    NotPositive { index: usize },
    /// Spacing input must be non-increasing.
    NotSorted { index: usize },
}

impl fmt::Display for StatsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            StatsError::EmptySamples => write!(f, "empty sample set"),
            StatsError::TooFewSamples { got, need } => {
                write!(f, "need at least {need} samples, got {got}")
            }
            StatsError::TreeTooLarge { n, max } => {
                write!(f, "exact enumeration needs n <= {max}, got {n}")
            }
            StatsError::OrderTooLarge { k, max } => {
                write!(f, "exact enumeration needs 1 <= k <= {max}, got {k}")
            }
            StatsError::ProbabilitiesDontSum { total } => {
                write!(f, "bucket probabilities sum to {total}, not 1")
            }
            StatsError::ExpectedCountTooSmall { bucket, expected } => {
                write!(
                    f,
                    "expected count {expected} in bucket {bucket} is below 5; merge tails first"
                )
            }
            StatsError::LengthMismatch { observed, expected } => {
                write!(f, "{observed} observed buckets vs {expected} expected")
            }
            StatsError::DegenerateCdf => write!(f, "reference cdf is degenerate on the sample"),
            StatsError::NotPositive { index } => {
                write!(f, "entry {index} is not strictly positive")
            }
            StatsError::NotSorted { index } => {
                write!(f, "entry {index} increases; input must be non-increasing")
            }
        }
    }
}

/// Compensated accumulator; the exact oracles sum tens of thousands of
/// terms and are checked to 1e-12.
#[derive(Default)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

/// Evaluates both sides of the moment identity exactly.
///
/// The left side sums `((n+1)^-1 C0)^k` over all `2^n` edge masks weighted
/// by `p^kept (1-p)^removed`; the right side averages `p^(L_k)` over all
/// `(n+1)^k` target tuples. Up to floating round-off the two must agree for
/// every tree, `k`, and `p`.
pub fn exact_moment_both_sides(tree: &Tree, k: u32, p: f64) -> Result<(f64, f64), StatsError> {
    const MAX_N: usize = 14;
    const MAX_K: u32 = 4;
    let n = tree.edge_count();
    if n > MAX_N {
        return Err(StatsError::TreeTooLarge { n, max: MAX_N });
    }
    if !(1..=MAX_K).contains(&k) {
        return Err(StatsError::OrderTooLarge { k, max: MAX_K });
    }
    assert!((0.0..=1.0).contains(&p), "p must be a probability");
    let verts = n + 1;

    // A vertex is in the root cluster exactly when its whole root path is
    // kept; process vertices by depth so parents are resolved first.
    let table = depths(tree);
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_unstable_by_key(|&v| table.get(v as Vertex));

    let mut keep_pow = vec![1.0f64; n + 1];
    let mut drop_pow = vec![1.0f64; n + 1];
    for i in 1..=n {
        keep_pow[i] = keep_pow[i - 1] * p;
        drop_pow[i] = drop_pow[i - 1] * (1.0 - p);
    }

    let mut lhs = Kahan::default();
    let mut in_root = vec![false; verts];
    in_root[0] = true;
    for mask in 0u32..(1u32 << n) {
        let kept = mask.count_ones() as usize;
        let weight = keep_pow[kept] * drop_pow[n - kept];
        let mut c0 = 1usize;
        for &v in &order {
            let edge_kept = (mask >> (v - 1)) & 1 == 1;
            let inside = edge_kept && in_root[tree.parent_raw(v)];
            in_root[v] = inside;
            c0 += usize::from(inside);
        }
        lhs.add(weight * math::powi(c0 as f64 / verts as f64, k));
    }

    let mut rhs = Kahan::default();
    let mut tuple = vec![0 as Vertex; k as usize];
    'tuples: loop {
        let length = reduced_length(tree, &tuple).expect("tuple stays in range");
        rhs.add(math::powi(p, length as u32));
        let mut pos = 0;
        while pos < tuple.len() {
            tuple[pos] += 1;
            if (tuple[pos] as usize) < verts {
                continue 'tuples;
            }
            tuple[pos] = 0;
            pos += 1;
        }
        break;
    }

    Ok((lhs.value(), rhs.value() / math::powi(verts as f64, k)))
}

/// Sample mean and standard error of the k-th powers of `samples`.
pub fn empirical_moment(samples: &[f64], k: u32) -> Result<(f64, f64), StatsError> {
    if samples.is_empty() {
        return Err(StatsError::EmptySamples);
    }
    let n = samples.len() as f64;
    let mut sum = Kahan::default();
    for &x in samples {
        sum.add(math::powi(x, k));
    }
    let mean = sum.value() / n;
    if samples.len() == 1 {
        return Ok((mean, 0.0));
    }
    let mut sq = Kahan::default();
    for &x in samples {
        let d = math::powi(x, k) - mean;
        sq.add(d * d);
    }
    let var = sq.value() / (n - 1.0);
    Ok((mean, math::sqrt(var / n)))
}

/// One-sample Kolmogorov-Smirnov test of `samples` against a reference CDF.
///
/// The p-value comes from the asymptotic Kolmogorov distribution evaluated
/// at `sqrt(n) * D_n`.
pub fn ks_test<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<SummaryStats, StatsError> {
    const MIN_SAMPLES: usize = 10;
    if samples.len() < MIN_SAMPLES {
        return Err(StatsError::TooFewSamples {
            got: samples.len(),
            need: MIN_SAMPLES,
        });
    }
    let mut xs = samples.to_vec();
    xs.sort_unstable_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    let mut prev_f = 0.0f64;
    let mut first_f = f64::NAN;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        if !(0.0..=1.0).contains(&f) || f + 1e-9 < prev_f {
            return Err(StatsError::DegenerateCdf);
        }
        if i == 0 {
            first_f = f;
        }
        prev_f = f;
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    if prev_f - first_f <= 0.0 && xs[0] < xs[xs.len() - 1] {
        return Err(StatsError::DegenerateCdf);
    }
    let statistic = math::sqrt(n) * d;
    Ok(SummaryStats {
        test_name: "ks",
        estimate: d,
        std_error: 0.0,
        theory: 0.0,
        statistic,
        p_value: special::kolmogorov_sf(statistic),
        n_samples: xs.len(),
    })
}

/// Two-sample Kolmogorov-Smirnov distance with the asymptotic p-value at
/// effective sample size `n m / (n + m)`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<SummaryStats, StatsError> {
    const MIN_SAMPLES: usize = 10;
    if a.len() < MIN_SAMPLES || b.len() < MIN_SAMPLES {
        return Err(StatsError::TooFewSamples {
            got: a.len().min(b.len()),
            need: MIN_SAMPLES,
        });
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_unstable_by(f64::total_cmp);
    ys.sort_unstable_by(f64::total_cmp);
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < xs.len() && j < ys.len() {
        let t = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= t {
            i += 1;
        }
        while j < ys.len() && ys[j] <= t {
            j += 1;
        }
        d = d.max(math::abs(i as f64 / na - j as f64 / nb));
    }
    let n_eff = na * nb / (na + nb);
    let statistic = math::sqrt(n_eff) * d;
    Ok(SummaryStats {
        test_name: "ks2",
        estimate: d,
        std_error: 0.0,
        theory: 0.0,
        statistic,
        p_value: special::kolmogorov_sf(statistic),
        n_samples: a.len() + b.len(),
    })
}

/// Pearson chi-square test of observed counts against bucket probabilities.
///
/// Probabilities must sum to 1 within 1e-12 and every expected count must be
/// at least 5 (merge tails first, e.g. with [`bucket_tail`]). Degrees of
/// freedom are `buckets - 1`.
pub fn chi_square_test(observed: &[u64], expected: &[f64]) -> Result<SummaryStats, StatsError> {
    if observed.len() != expected.len() {
        return Err(StatsError::LengthMismatch {
            observed: observed.len(),
            expected: expected.len(),
        });
    }
    if observed.len() < 2 {
        return Err(StatsError::TooFewSamples {
            got: observed.len(),
            need: 2,
        });
    }
    let total_prob: f64 = expected.iter().sum();
    if math::abs(total_prob - 1.0) > 1e-12 {
        return Err(StatsError::ProbabilitiesDontSum { total: total_prob });
    }
    let n: u64 = observed.iter().sum();
    let nf = n as f64;
    let mut stat = 0.0;
    for (bucket, (&o, &pr)) in observed.iter().zip(expected).enumerate() {
        let e = pr * nf;
        if e < 5.0 {
            return Err(StatsError::ExpectedCountTooSmall {
                bucket,
                expected: e,
            });
        }
        let diff = o as f64 - e;
        stat += diff * diff / e;
    }
    let dof = (observed.len() - 1) as f64;
    Ok(SummaryStats {
        test_name: "chi_square",
        estimate: stat,
        std_error: math::sqrt(2.0 * dof),
        theory: dof,
        statistic: stat,
        p_value: special::gamma_q(dof / 2.0, stat / 2.0),
        n_samples: n as usize,
    })
}

/// Merges buckets from the right until every expected count reaches
/// `min_expected` (intended for pmfs with decreasing tails).
pub fn bucket_tail(
    observed: Vec<u64>,
    probs: Vec<f64>,
    min_expected: f64,
) -> (Vec<u64>, Vec<f64>) {
    assert_eq!(observed.len(), probs.len());
    let mut observed = observed;
    let mut probs = probs;
    let n: f64 = observed.iter().sum::<u64>() as f64;
    while probs.len() > 1 {
        let last = probs.len() - 1;
        if probs[last] * n >= min_expected && probs[last - 1] * n >= min_expected {
            break;
        }
        let (po, pp) = (observed.pop().unwrap(), probs.pop().unwrap());
        observed[last - 1] += po;
        probs[last - 1] += pp;
    }
    (observed, probs)
}

/// Survival law of the lowest removed edge in a percolated complete d-ary
/// tree of height `h`: `P(kappa > j) = p^(d (d^j - 1) / (d - 1))`, the
/// probability that all edges at height at most `j` are kept.
pub fn kappa_survival(d: u32, h: u32, j: u32, p: f64) -> f64 {
    assert!(d >= 2, "need d >= 2");
    assert!(h >= 1, "need h >= 1");
    assert!((1..=h).contains(&j), "need 1 <= j <= h, got j = {j}");
    assert!((0.0..=1.0).contains(&p), "p must be a probability");
    // Number of edges at height <= j.
    let mut edges: u64 = 0;
    let mut level: u64 = 1;
    for _ in 0..j {
        level = level.saturating_mul(d as u64);
        edges = edges.saturating_add(level);
    }
    if edges <= u32::MAX as u64 {
        math::powi(p, edges as u32)
    } else {
        math::pow(p, edges as f64)
    }
}

/// Maps ranked positive values `x_1 >= x_2 >= ... >= x_j` to the inverse
/// spacings `(1/x_1, 1/x_2 - 1/x_1, ..., 1/x_j - 1/x_(j-1))`, which are
/// i.i.d. exponential under the almost-giant limit law.
pub fn spacing_transform(ranked: &[f64]) -> Result<Vec<f64>, StatsError> {
    let mut out = Vec::with_capacity(ranked.len());
    let mut prev_inv = 0.0;
    for (i, &x) in ranked.iter().enumerate() {
        if !(x > 0.0) {
            return Err(StatsError::NotPositive { index: i });
        }
        if i > 0 && x > ranked[i - 1] {
            return Err(StatsError::NotSorted { index: i });
        }
        let inv = 1.0 / x;
        out.push(inv - prev_inv);
        prev_inv = inv;
    }
    Ok(out)
}

/// Exponential CDF with the given rate.
pub fn exponential_cdf(rate: f64, x: f64) -> f64 {
    assert!(rate > 0.0, "rate must be positive");
    if x <= 0.0 {
        0.0
    } else {
        1.0 - math::exp(-rate * x)
    }
}

/// CDF of the chi distribution (not chi-square) with `dof` degrees of
/// freedom: `P(X <= x) = P(dof/2, x^2 / 2)`.
pub fn chi_cdf(dof: u32, x: f64) -> f64 {
    assert!(dof >= 1);
    if x <= 0.0 {
        0.0
    } else {
        special::gamma_p(dof as f64 / 2.0, x * x / 2.0)
    }
}

/// Mean of the chi distribution: `sqrt(2) Gamma((dof+1)/2) / Gamma(dof/2)`.
pub fn chi_mean(dof: u32) -> f64 {
    assert!(dof >= 1);
    let d = dof as f64;
    core::f64::consts::SQRT_2
        * math::exp(special::ln_gamma((d + 1.0) / 2.0) - special::ln_gamma(d / 2.0))
}

/// Limiting root-cluster proportion for recursive trees, `e^-c`.
pub fn theta_recursive(c: f64) -> f64 {
    math::exp(-c)
}

/// Limiting root-cluster proportion for scale-free trees,
/// `e^(-c (1+beta)/(2+beta))`.
pub fn theta_scale_free(c: f64, beta: f64) -> f64 {
    assert!(beta > -1.0);
    math::exp(-c * (1.0 + beta) / (2.0 + beta))
}

/// Two-sided normal p-value, `P(|Z| >= |z|)`, via the chi-square tail of
/// `z^2`.
pub fn normal_two_sided_p(z: f64) -> f64 {
    if !z.is_finite() {
        return if z.is_nan() { f64::NAN } else { 0.0 };
    }
    special::gamma_q(0.5, 0.5 * z * z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_cayley, gen_dary, gen_recursive, gen_scale_free, gen_star};
    use crate::tree::Tree;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    #[test]
    fn exact_moments_on_the_path() {
        // Path 0-1-2: E[C0] = 1 + p + p^2 and L_1 uniform on {0,1,2}, so
        // both sides equal (1 + p + p^2)/3 at k = 1.
        let t = Tree::from_parents(alloc::vec![0, 1]).unwrap();
        for p in [0.0, 0.3, 0.7, 1.0] {
            let (lhs, rhs) = exact_moment_both_sides(&t, 1, p).unwrap();
            let expect = (1.0 + p + p * p) / 3.0;
            close(lhs, expect, 1e-14);
            close(rhs, expect, 1e-14);
        }
    }

    #[test]
    fn exact_moments_trivial_p() {
        let mut rng = ChaCha12Rng::seed_from_u64(10);
        let t = gen_recursive(6, &mut rng).unwrap();
        for k in 1..=3 {
            let (lhs, rhs) = exact_moment_both_sides(&t, k, 1.0).unwrap();
            close(lhs, 1.0, 1e-13);
            close(rhs, 1.0, 1e-13);
        }
        let (lhs, rhs) = exact_moment_both_sides(&t, 1, 0.0).unwrap();
        close(lhs, 1.0 / 7.0, 1e-14);
        close(rhs, 1.0 / 7.0, 1e-14);
    }

    #[test]
    fn exact_moments_agree_across_families() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let trees = [
            gen_recursive(8, &mut rng).unwrap(),
            gen_scale_free(9, -0.5, &mut rng).unwrap(),
            gen_cayley(7, &mut rng).unwrap(),
            gen_dary(2, 2).unwrap(),
            gen_star(10, 0.5).unwrap(),
        ];
        for t in &trees {
            for k in 1..=3 {
                for p in [0.3, 0.7] {
                    let (lhs, rhs) = exact_moment_both_sides(t, k, p).unwrap();
                    assert!(
                        (lhs - rhs).abs() <= 1e-12,
                        "n = {}, k = {k}, p = {p}: {lhs} vs {rhs}",
                        t.edge_count()
                    );
                }
            }
        }
    }

    #[test]
    fn exact_moments_enforce_limits() {
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        let big = gen_recursive(15, &mut rng).unwrap();
        assert!(matches!(
            exact_moment_both_sides(&big, 1, 0.5),
            Err(StatsError::TreeTooLarge { .. })
        ));
        let small = gen_recursive(3, &mut rng).unwrap();
        assert!(matches!(
            exact_moment_both_sides(&small, 5, 0.5),
            Err(StatsError::OrderTooLarge { .. })
        ));
    }

    #[test]
    fn empirical_moment_basics() {
        let (m, se) = empirical_moment(&[0.5, 0.5, 0.5], 2).unwrap();
        close(m, 0.25, 1e-15);
        close(se, 0.0, 1e-15);
        let (m, se) = empirical_moment(&[0.0, 1.0], 1).unwrap();
        close(m, 0.5, 1e-15);
        close(se, 0.5, 1e-15);
        assert_eq!(empirical_moment(&[], 1), Err(StatsError::EmptySamples));
    }

    #[test]
    fn empirical_moment_uniform_second_moment() {
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        let samples: alloc::vec::Vec<f64> = (0..1_000_000).map(|_| rng.gen::<f64>()).collect();
        let (m, se) = empirical_moment(&samples, 2).unwrap();
        assert!((m - 1.0 / 3.0).abs() < 4.0 * se, "m = {m}, se = {se}");
    }

    #[test]
    fn ks_statistic_at_quantile_grid() {
        // Samples placed exactly at the (i - 1/2)/n uniform quantiles give
        // D_n = 1/(2n).
        let n = 50;
        let samples: alloc::vec::Vec<f64> =
            (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let s = ks_test(&samples, |x| x.clamp(0.0, 1.0)).unwrap();
        close(s.estimate, 0.5 / n as f64, 1e-12);
    }

    #[test]
    fn ks_rejects_wrong_rate_exponential() {
        let mut rng = ChaCha12Rng::seed_from_u64(14);
        let samples: alloc::vec::Vec<f64> = (0..10_000)
            .map(|_| -(1.0 - rng.gen::<f64>()).ln())
            .collect();
        let s = ks_test(&samples, |x| exponential_cdf(2.0, x)).unwrap();
        assert!(s.p_value < 1e-6, "p = {}", s.p_value);
        let ok = ks_test(&samples, |x| exponential_cdf(1.0, x)).unwrap();
        assert!(ok.p_value > 1e-3, "p = {}", ok.p_value);
    }

    #[test]
    fn ks_rejects_degenerate_cdf() {
        let samples: alloc::vec::Vec<f64> = (0..20).map(|i| i as f64).collect();
        assert_eq!(
            ks_test(&samples, |_| 0.5).unwrap_err(),
            StatsError::DegenerateCdf
        );
    }

    /// Under the null, the p-value is uniform: the rejection rate at level
    /// 0.01 over many repetitions stays in a 4-sigma binomial band.
    #[test]
    fn ks_calibration_under_the_null() {
        let mut rng = ChaCha12Rng::seed_from_u64(15);
        let reps = 1000;
        let n = 2000;
        let mut rejections = 0;
        for _ in 0..reps {
            let samples: alloc::vec::Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let s = ks_test(&samples, |x| x.clamp(0.0, 1.0)).unwrap();
            if s.p_value < 0.01 {
                rejections += 1;
            }
        }
        let rate = rejections as f64 / reps as f64;
        let band = 4.0 * (0.01f64 * 0.99 / reps as f64).sqrt();
        assert!((rate - 0.01).abs() < band, "rate = {rate}");
    }

    #[test]
    fn ks_two_sample_detects_shift_and_accepts_null() {
        let mut rng = ChaCha12Rng::seed_from_u64(16);
        let a: alloc::vec::Vec<f64> = (0..5000).map(|_| rng.gen::<f64>()).collect();
        let b: alloc::vec::Vec<f64> = (0..5000).map(|_| rng.gen::<f64>()).collect();
        let shifted: alloc::vec::Vec<f64> = a.iter().map(|x| x + 0.2).collect();
        assert!(ks_two_sample(&a, &b).unwrap().p_value > 1e-3);
        assert!(ks_two_sample(&a, &shifted).unwrap().p_value < 1e-6);
    }

    #[test]
    fn chi_square_exact_small_cases() {
        let s = chi_square_test(&[50, 50], &[0.5, 0.5]).unwrap();
        close(s.statistic, 0.0, 1e-15);
        close(s.p_value, 1.0, 1e-12);
        let s = chi_square_test(&[60, 40], &[0.5, 0.5]).unwrap();
        close(s.statistic, 4.0, 1e-12);
    }

    #[test]
    fn chi_square_matches_reference_implementation() {
        // Cross-checked value: chi2.sf(2.417910447761194, 3) with counts
        // [28, 31, 40, 35] against uniform probabilities.
        let s = chi_square_test(&[28, 31, 40, 35], &[0.25; 4]).unwrap();
        close(s.statistic, 2.417_910_447_761_194, 1e-12);
        close(s.p_value, 0.490_309_306_965_388_3, 1e-12);
    }

    #[test]
    fn chi_square_rejects_bad_inputs() {
        assert!(matches!(
            chi_square_test(&[10, 10], &[0.6, 0.6]),
            Err(StatsError::ProbabilitiesDontSum { .. })
        ));
        assert!(matches!(
            chi_square_test(&[100, 0], &[0.99, 0.01]),
            Err(StatsError::ExpectedCountTooSmall { bucket: 1, .. })
        ));
        assert!(matches!(
            chi_square_test(&[1, 2], &[0.5, 0.3, 0.2]),
            Err(StatsError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn chi_square_calibration_under_the_null() {
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        let reps = 1000;
        let draws = 1000;
        let probs = [0.2f64; 5];
        let mut rejections = 0;
        for _ in 0..reps {
            let mut counts = [0u64; 5];
            for _ in 0..draws {
                counts[rng.gen_range(0..5)] += 1;
            }
            if chi_square_test(&counts, &probs).unwrap().p_value < 0.01 {
                rejections += 1;
            }
        }
        let rate = rejections as f64 / reps as f64;
        let band = 4.0 * (0.01f64 * 0.99 / reps as f64).sqrt();
        assert!((rate - 0.01).abs() < band, "rate = {rate}");
    }

    #[test]
    fn bucket_tail_merges_until_expected_is_large_enough() {
        // 100 draws: tail probabilities 0.02 + 0.01 + 0.01 merge into the
        // 0.06 bucket to reach an expected count of 10.
        let (obs, probs) = bucket_tail(
            alloc::vec![50, 40, 6, 2, 1, 1],
            alloc::vec![0.5, 0.4, 0.06, 0.02, 0.01, 0.01],
            5.0,
        );
        assert_eq!(obs, alloc::vec![50, 40, 10]);
        close(probs[2], 0.1, 1e-15);
        assert!(chi_square_test(&obs, &probs).is_ok());
    }

    #[test]
    fn kappa_survival_formula_values() {
        close(kappa_survival(2, 12, 3, 1.0), 1.0, 1e-15);
        let p = 0.95;
        close(kappa_survival(2, 12, 1, p), p * p, 1e-15);
        close(kappa_survival(2, 12, 2, 0.9), 0.531_441, 1e-12);
    }

    #[test]
    #[should_panic(expected = "1 <= j <= h")]
    fn kappa_survival_rejects_out_of_range_height() {
        kappa_survival(2, 4, 5, 0.5);
    }

    #[test]
    fn spacing_transform_examples() {
        assert_eq!(spacing_transform(&[2.0, 1.0]).unwrap(), alloc::vec![0.5, 0.5]);
        let h = spacing_transform(&[1.0, 0.5, 1.0 / 3.0]).unwrap();
        for v in h {
            close(v, 1.0, 1e-12);
        }
        assert_eq!(
            spacing_transform(&[1.0, 0.0]),
            Err(StatsError::NotPositive { index: 1 })
        );
        assert_eq!(
            spacing_transform(&[1.0, 2.0]),
            Err(StatsError::NotSorted { index: 1 })
        );
    }

    #[test]
    fn spacing_transform_inverts_cumulative_sums() {
        let mut rng = ChaCha12Rng::seed_from_u64(18);
        for _ in 0..200 {
            let len = rng.gen_range(1..=8);
            let spacings: alloc::vec::Vec<f64> =
                (0..len).map(|_| -(1.0 - rng.gen::<f64>()).ln() + 1e-12).collect();
            let mut acc = 0.0;
            let ranked: alloc::vec::Vec<f64> = spacings
                .iter()
                .map(|&e| {
                    acc += e;
                    1.0 / acc
                })
                .collect();
            let back = spacing_transform(&ranked).unwrap();
            for (orig, got) in spacings.iter().zip(back) {
                assert!((orig - got).abs() < 1e-9 * orig.max(1.0));
            }
        }
    }

    #[test]
    fn poisson_limit_reference_values() {
        let r = PoissonLimitRef::recursive(1.0);
        close(r.rate, (-1.0f64).exp(), 1e-15);
        let s = PoissonLimitRef::scale_free(1.0, 0.0);
        close(s.rate, (-0.5f64).exp(), 1e-15);
        // x_1 cdf from the gamma form matches exp(-rate/x).
        for x in [0.1, 0.5, 2.0, 10.0] {
            close(r.xj_cdf(1, x), (-r.rate / x).exp(), 1e-12);
        }
        close(r.inv_x1_cdf(r.rate.recip() * core::f64::consts::LN_2), 0.5, 1e-12);
        close(r.xj_cdf(1, r.median_x1()), 0.5, 1e-12);
    }

    #[test]
    fn chi_distribution_helpers() {
        // Cross-checked: chi.cdf(1.2, 2) and chi.cdf(2.5, 6).
        close(chi_cdf(2, 1.2), 0.513_247_744_040_028_5, 1e-12);
        close(chi_cdf(6, 2.5), 0.604_224_340_095_400_3, 1e-12);
        close(chi_mean(2), (core::f64::consts::PI / 2.0).sqrt(), 1e-12);
    }

    #[test]
    fn theta_references() {
        close(theta_recursive(1.0), 0.367_879_441_171_442_3, 1e-15);
        close(theta_scale_free(1.0, 0.0), 0.606_530_659_712_633_4, 1e-15);
        // beta -> infinity recovers the recursive constant.
        close(theta_scale_free(1.0, 1e9), theta_recursive(1.0), 1e-8);
    }

    #[test]
    fn normal_p_values() {
        close(normal_two_sided_p(0.0), 1.0, 1e-15);
        // P(|Z| > 1.959963984540054) = 0.05.
        close(normal_two_sided_p(1.959_963_984_540_054), 0.05, 1e-10);
        assert!(normal_two_sided_p(f64::NEG_INFINITY) == 0.0);
    }
}
