//! Bernoulli bond percolation on a rooted tree.
//!
//! Each edge is kept independently with probability `p`; the connected
//! components of the kept edges are the clusters. The outcome records the
//! size of the cluster containing the root and the non-root cluster sizes
//! ranked in decreasing order.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::math;
use crate::tree::Tree;

/// The scaling function `l(n)` of the critical regime `p = 1 - c / l(n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scale {
    /// `l(n) = ln n`.
    Log,
    /// `l(n) = sqrt n`.
    Sqrt,
    /// `l(n) = n^alpha`.
    Power(f64),
}

impl Scale {
    /// Evaluates `l(n)`.
    pub fn eval(self, n: usize) -> f64 {
        match self {
            Scale::Log => math::ln(n as f64),
            Scale::Sqrt => math::sqrt(n as f64),
            Scale::Power(alpha) => math::pow(n as f64, alpha),
        }
    }
}

/// Errors from evaluating the percolation regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegimeError {
    /// `c` must be non-negative.
    NegativeConstant { c: f64 },
    /// `c` must be smaller than `l(n)` for the parameter to lie in `(0, 1]`.
    ScaleTooSmall { c: f64, ell: f64 },
}

impl fmt::Display for RegimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RegimeError::NegativeConstant { c } => {
                write!(f, "percolation constant must be >= 0, got {c}")
            }
            RegimeError::ScaleTooSmall { c, ell } => {
                write!(
                    f,
                    "invalid regime: c = {c} must be below l(n) = {ell} for p to lie in (0, 1]"
                )
            }
        }
    }
}

/// The critical-regime percolation parameter `p(n) = 1 - c / l(n)`
/// (the vanishing correction term is fixed to zero).
pub fn regime_p(n: usize, c: f64, scale: Scale) -> Result<f64, RegimeError> {
    if !(c >= 0.0) {
        return Err(RegimeError::NegativeConstant { c });
    }
    let ell = scale.eval(n);
    if !(c < ell) {
        return Err(RegimeError::ScaleTooSmall { c, ell });
    }
    Ok(1.0 - c / ell)
}

/// Which edges survived percolation: entry `i` refers to the edge between
/// vertex `i + 1` and its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMask {
    kept: Vec<bool>,
}

impl EdgeMask {
    /// Wraps an explicit keep decision per edge.
    pub fn new(kept: Vec<bool>) -> Self {
        EdgeMask { kept }
    }

    /// Keep decisions indexed by `vertex - 1`.
    pub fn kept(&self) -> &[bool] {
        &self.kept
    }

    /// Number of edges covered by the mask.
    pub fn len(&self) -> usize {
        self.kept.len()
    }

    /// True when the mask covers no edges.
    pub fn is_empty(&self) -> bool {
        self.kept.is_empty()
    }

    /// Number of kept edges.
    pub fn kept_count(&self) -> usize {
        self.kept.iter().filter(|&&k| k).count()
    }
}

/// Keeps each edge of `tree` independently with probability `p`.
pub fn percolate<R: Rng + ?Sized>(tree: &Tree, p: f64, rng: &mut R) -> EdgeMask {
    assert!((0.0..=1.0).contains(&p), "p must be a probability, got {p}");
    EdgeMask {
        kept: (0..tree.edge_count()).map(|_| rng.gen_bool(p)).collect(),
    }
}

/// Cluster decomposition of a percolated tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PercolationOutcome {
    /// Size of the cluster containing the root (between 1 and `n + 1`).
    pub root_cluster_size: usize,
    /// Non-root cluster sizes in non-increasing order.
    pub ranked_sizes: Vec<usize>,
    /// Total number of clusters, always `1 + removed edges`.
    pub cluster_count: usize,
}

/// Extracts cluster sizes from a kept-edge mask in linear time (plus the
/// sort of the non-root sizes).
///
/// Trees with increasing labels are labeled in a single vertex-order pass;
/// general trees go through union-find.
pub fn cluster_sizes(tree: &Tree, mask: &EdgeMask) -> PercolationOutcome {
    assert_eq!(
        mask.kept.len(),
        tree.edge_count(),
        "mask length must equal the edge count"
    );
    let (root_cluster_size, mut ranked_sizes) = if tree.is_increasing() {
        label_forward(tree, mask)
    } else {
        label_union_find(tree, mask)
    };
    ranked_sizes.sort_unstable_by(|a, b| b.cmp(a));
    let cluster_count = ranked_sizes.len() + 1;
    debug_assert_eq!(
        root_cluster_size + ranked_sizes.iter().sum::<usize>(),
        tree.vertex_count()
    );
    debug_assert_eq!(cluster_count, 1 + mask.len() - mask.kept_count());
    PercolationOutcome {
        root_cluster_size,
        ranked_sizes,
        cluster_count,
    }
}

/// Single-pass labeling, valid when `parent[i] < i`: a kept edge joins the
/// parent's cluster, a removed edge opens a fresh one.
fn label_forward(tree: &Tree, mask: &EdgeMask) -> (usize, Vec<usize>) {
    let n = tree.edge_count();
    let mut label: Vec<u32> = vec![0; n + 1];
    let mut sizes: Vec<usize> = vec![1];
    for v in 1..=n {
        if mask.kept[v - 1] {
            let l = label[tree.parent_raw(v)];
            label[v] = l;
            sizes[l as usize] += 1;
        } else {
            label[v] = sizes.len() as u32;
            sizes.push(1);
        }
    }
    let root = sizes[0];
    sizes.remove(0);
    (root, sizes)
}

fn label_union_find(tree: &Tree, mask: &EdgeMask) -> (usize, Vec<usize>) {
    let n = tree.edge_count();
    let mut sets = DisjointSets::new(n + 1);
    for v in 1..=n {
        if mask.kept[v - 1] {
            sets.union(v, tree.parent_raw(v));
        }
    }
    let mut count: Vec<usize> = vec![0; n + 1];
    for v in 0..=n {
        count[sets.find(v)] += 1;
    }
    let root_rep = sets.find(0);
    let root = count[root_rep];
    let others = count
        .into_iter()
        .enumerate()
        .filter(|&(rep, c)| c > 0 && rep != root_rep)
        .map(|(_, c)| c)
        .collect();
    (root, others)
}

/// Union-find with path halving and union by size.
struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let mut ra = self.find(a);
        let mut rb = self.find(b);
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            core::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
    }
}
