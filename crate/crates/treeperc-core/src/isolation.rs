//! Random isolation of the root: repeatedly remove a uniform edge of the
//! component containing the root and freeze the detached subtree, until the
//! root stands alone.
//!
//! On a uniform random recursive tree the size of the first frozen subtree
//! follows the law `P(eta = j) = 1 / (j (j + 1))` conditioned on `eta <= n`.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::math;
use crate::tree::Tree;

/// The ordered sizes of the subtrees frozen by the isolation algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolationTrace {
    /// Size of the subtree set aside at each cut, in cut order.
    pub frozen_sizes: Vec<usize>,
}

impl IsolationTrace {
    /// Number of cuts performed before the root was isolated.
    pub fn steps(&self) -> usize {
        self.frozen_sizes.len()
    }
}

/// Runs the isolation algorithm on `tree`.
///
/// The live edges of the root component are kept in a swap-remove list so a
/// uniform pick is O(1); a cut discards the frozen subtree's edges by
/// traversing it once, so the total work over a full run is O(n).
pub fn isolate_root<R: Rng + ?Sized>(tree: &Tree, rng: &mut R) -> IsolationTrace {
    let n = tree.edge_count();
    // Children lists in CSR form.
    let mut offset = vec![0u32; n + 2];
    for v in 1..=n {
        offset[tree.parent_raw(v) + 1] += 1;
    }
    for i in 0..=n {
        offset[i + 1] += offset[i];
    }
    let mut children = vec![0u32; n];
    let mut cursor: Vec<u32> = offset[..=n].to_vec();
    for v in 1..=n {
        let p = tree.parent_raw(v);
        children[cursor[p] as usize] = v as u32;
        cursor[p] += 1;
    }
    // Edge v is the edge between v and its parent; `pos` tracks where each
    // live edge sits in the swap-remove list.
    let mut edges: Vec<u32> = (1..=n as u32).collect();
    let mut pos: Vec<u32> = vec![0; n + 1];
    for (at, &e) in edges.iter().enumerate() {
        pos[e as usize] = at as u32;
    }
    let mut in_root = vec![true; n + 1];
    let mut frozen_sizes = Vec::new();
    let mut stack: Vec<u32> = Vec::new();
    while !edges.is_empty() {
        let cut = edges[rng.gen_range(0..edges.len())];
        let mut size = 0usize;
        stack.push(cut);
        while let Some(v) = stack.pop() {
            size += 1;
            in_root[v as usize] = false;
            let at = pos[v as usize] as usize;
            let last = *edges.last().expect("frozen vertex owns a live edge");
            edges.swap_remove(at);
            if last != v {
                pos[last as usize] = at as u32;
            }
            let lo = offset[v as usize] as usize;
            let hi = offset[v as usize + 1] as usize;
            for &c in &children[lo..hi] {
                if in_root[c as usize] {
                    stack.push(c);
                }
            }
        }
        frozen_sizes.push(size);
    }
    debug_assert_eq!(frozen_sizes.iter().sum::<usize>(), n);
    IsolationTrace { frozen_sizes }
}

/// `P(eta = j) = 1 / (j (j + 1))` for `j >= 1`.
pub fn eta_pmf(j: u64) -> f64 {
    assert!(j >= 1, "eta is supported on positive integers");
    1.0 / (j as f64 * (j as f64 + 1.0))
}

/// Samples `eta` by inversion: `floor(1/U)` for `U` uniform on `(0, 1)`,
/// which hits `j` exactly when `U` falls in `(1/(j+1), 1/j]`, an interval of
/// length `1/(j(j+1))`. With `cap = Some(n)` the draw is rejected until it
/// is at most `n`, giving the law of `eta` conditioned on `eta <= n`.
pub fn sample_eta<R: Rng + ?Sized>(rng: &mut R, cap: Option<u64>) -> u64 {
    if let Some(c) = cap {
        assert!(c >= 1, "cap must be >= 1");
    }
    loop {
        let u: f64 = rng.gen();
        if u <= 0.0 {
            continue;
        }
        let x = math::floor(1.0 / u);
        let j = if x >= u64::MAX as f64 { u64::MAX } else { x as u64 };
        match cap {
            None => return j,
            Some(c) if j <= c => return j,
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::gen_recursive;
    use crate::tree::Tree;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn single_edge_tree_has_forced_trace() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let t = Tree::from_parents(alloc::vec![0]).unwrap();
        let trace = isolate_root(&t, &mut rng);
        assert_eq!(trace.frozen_sizes, alloc::vec![1]);
        assert_eq!(trace.steps(), 1);
    }

    #[test]
    fn path_first_cut_is_fair() {
        // Cutting (1,2) freezes {2}; cutting (0,1) freezes {1,2}.
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let t = Tree::from_parents(alloc::vec![0, 1]).unwrap();
        let trials = 100_000;
        let mut ones = 0usize;
        for _ in 0..trials {
            let trace = isolate_root(&t, &mut rng);
            if trace.frozen_sizes[0] == 1 {
                ones += 1;
            }
        }
        let freq = ones as f64 / trials as f64;
        let band = 4.0 * (0.25f64 / trials as f64).sqrt();
        assert!((freq - 0.5).abs() < band, "freq = {freq}");
    }

    #[test]
    fn frozen_sizes_partition_the_non_root_vertices() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for n in [1usize, 2, 7, 64, 500] {
            let t = gen_recursive(n, &mut rng).unwrap();
            let trace = isolate_root(&t, &mut rng);
            assert_eq!(trace.frozen_sizes.iter().sum::<usize>(), n);
            assert!(trace.frozen_sizes.iter().all(|&s| s >= 1));
            assert!(trace.steps() <= n);
        }
    }

    #[test]
    fn eta_pmf_small_values_and_telescoping() {
        assert!((eta_pmf(1) - 0.5).abs() < 1e-15);
        assert!((eta_pmf(2) - 1.0 / 6.0).abs() < 1e-15);
        for n in [1u64, 5, 100, 10_000] {
            let total: f64 = (1..=n).map(eta_pmf).sum();
            assert!((total - n as f64 / (n as f64 + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    #[should_panic(expected = "positive integers")]
    fn eta_pmf_rejects_zero() {
        eta_pmf(0);
    }

    #[test]
    fn sample_eta_matches_pmf_at_one() {
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        let draws = 1_000_000;
        let ones = (0..draws)
            .filter(|_| sample_eta(&mut rng, None) == 1)
            .count();
        let freq = ones as f64 / draws as f64;
        let band = 4.0 * (0.25f64 / draws as f64).sqrt();
        assert!((freq - 0.5).abs() < band, "freq = {freq}");
    }

    #[test]
    fn sample_eta_cap_one_is_constant() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..1000 {
            assert_eq!(sample_eta(&mut rng, Some(1)), 1);
        }
    }

    /// The inversion map pushes the uniform law onto the pmf: measure the
    /// preimage intervals of `floor(1/u)` with a midpoint grid over (0, 1).
    #[test]
    fn inversion_sampler_matches_pmf_by_quadrature() {
        let cells = 2_000_000usize;
        let mut mass = alloc::vec![0.0f64; 101];
        for i in 0..cells {
            let u = (i as f64 + 0.5) / cells as f64;
            let j = math::floor(1.0 / u) as usize;
            if (1..=100).contains(&j) {
                mass[j] += 1.0 / cells as f64;
            }
        }
        for j in 1..=100u64 {
            // Each preimage is an interval, so the midpoint rule is exact up
            // to one cell at each boundary.
            let err = (mass[j as usize] - eta_pmf(j)).abs();
            assert!(err <= 2.5 / cells as f64, "j = {j}, err = {err}");
        }
    }

    /// Capped sampling renormalizes the pmf by n/(n+1).
    #[test]
    fn sample_eta_capped_matches_conditioned_law() {
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let n = 10u64;
        let draws = 200_000usize;
        let mut counts = [0usize; 11];
        for _ in 0..draws {
            counts[sample_eta(&mut rng, Some(n)) as usize] += 1;
        }
        for j in 1..=n {
            let expect = eta_pmf(j) * (n as f64 + 1.0) / n as f64;
            let freq = counts[j as usize] as f64 / draws as f64;
            let band = 4.0 * (expect * (1.0 - expect) / draws as f64).sqrt();
            assert!((freq - expect).abs() < band, "j = {j}: {freq} vs {expect}");
        }
    }
}
