//! Samplers and constructors for the five tree families.
//!
//! All generators produce a [`Tree`] on `{0, ..., n}` rooted at 0 in linear
//! or near-linear time. The random families (`recursive`, `scale_free`,
//! `cayley`) take an explicit RNG; `dary` and `star` are deterministic.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;

use rand::Rng;

use crate::math;
use crate::percolation::Scale;
use crate::tree::{Tree, Vertex};

/// Errors raised by family parameter validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GenError {
    /// Generators require at least one edge.
    EmptyTree,
    /// Scale-free attachment weight must satisfy `beta > -1`.
    BetaOutOfRange { beta: f64 },
    /// Star exponent must lie strictly inside `(0, 1)`.
    AlphaOutOfRange { alpha: f64 },
    /// d-ary trees need branching factor `d >= 2`.
    DegreeOutOfRange { d: u32 },
    /// d-ary trees need height `h >= 1`.
    HeightOutOfRange { h: u32 },
    /// The d-ary vertex count does not fit the index range.
    SizeOverflow,
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GenError::EmptyTree => write!(f, "tree must have at least one edge (n >= 1)"),
            GenError::BetaOutOfRange { beta } => {
                write!(f, "scale-free parameter must satisfy beta > -1, got {beta}")
            }
            GenError::AlphaOutOfRange { alpha } => {
                write!(f, "star exponent must lie in (0, 1), got {alpha}")
            }
            GenError::DegreeOutOfRange { d } => {
                write!(f, "d-ary branching factor must be >= 2, got {d}")
            }
            GenError::HeightOutOfRange { h } => {
                write!(f, "d-ary height must be >= 1, got {h}")
            }
            GenError::SizeOverflow => write!(f, "vertex count overflows the index range"),
        }
    }
}

/// A tree family together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilySpec {
    /// Uniform random recursive tree on `{0, ..., n}`.
    Recursive { n: usize },
    /// Preferential attachment with weight `degree + beta`, `beta > -1`.
    ScaleFree { n: usize, beta: f64 },
    /// Uniform labeled tree on `{0, ..., n}`.
    Cayley { n: usize },
    /// Complete d-ary tree of height `h` (size is derived from `d` and `h`).
    Dary { d: u32, h: u32 },
    /// About `n^(1-alpha)` paths of about `n^alpha` vertices each, all
    /// hanging from the root.
    Star { n: usize, alpha: f64 },
}

impl FamilySpec {
    /// Checks parameter ranges without generating anything.
    pub fn validate(&self) -> Result<(), GenError> {
        match *self {
            FamilySpec::Recursive { n } | FamilySpec::Cayley { n } => {
                if n == 0 {
                    return Err(GenError::EmptyTree);
                }
            }
            FamilySpec::ScaleFree { n, beta } => {
                if n == 0 {
                    return Err(GenError::EmptyTree);
                }
                if !(beta > -1.0) {
                    return Err(GenError::BetaOutOfRange { beta });
                }
            }
            FamilySpec::Dary { d, h } => {
                dary_edge_count(d, h)?;
            }
            FamilySpec::Star { n, alpha } => {
                if n == 0 {
                    return Err(GenError::EmptyTree);
                }
                if !(alpha > 0.0 && alpha < 1.0) {
                    return Err(GenError::AlphaOutOfRange { alpha });
                }
            }
        }
        Ok(())
    }

    /// Edge count of generated trees. For `Dary` this is
    /// `d (d^h - 1) / (d - 1)`, derived rather than configured.
    pub fn edge_count(&self) -> Result<usize, GenError> {
        match *self {
            FamilySpec::Recursive { n }
            | FamilySpec::ScaleFree { n, .. }
            | FamilySpec::Cayley { n }
            | FamilySpec::Star { n, .. } => Ok(n),
            FamilySpec::Dary { d, h } => dary_edge_count(d, h),
        }
    }

    /// The scaling function `l(n)` attached to the family: `ln n` for
    /// recursive, scale-free and d-ary trees, `sqrt n` for Cayley trees,
    /// and `n^alpha` for star trees.
    pub fn scale(&self) -> Scale {
        match *self {
            FamilySpec::Recursive { .. }
            | FamilySpec::ScaleFree { .. }
            | FamilySpec::Dary { .. } => Scale::Log,
            FamilySpec::Cayley { .. } => Scale::Sqrt,
            FamilySpec::Star { alpha, .. } => Scale::Power(alpha),
        }
    }

    /// Short family tag for reports.
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Recursive { .. } => "recursive",
            FamilySpec::ScaleFree { .. } => "scalefree",
            FamilySpec::Cayley { .. } => "cayley",
            FamilySpec::Dary { .. } => "dary",
            FamilySpec::Star { .. } => "star",
        }
    }

    /// Samples one tree from the family.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Tree, GenError> {
        match *self {
            FamilySpec::Recursive { n } => gen_recursive(n, rng),
            FamilySpec::ScaleFree { n, beta } => gen_scale_free(n, beta, rng),
            FamilySpec::Cayley { n } => gen_cayley(n, rng),
            FamilySpec::Dary { d, h } => gen_dary(d, h),
            FamilySpec::Star { n, alpha } => gen_star(n, alpha),
        }
    }
}

fn dary_edge_count(d: u32, h: u32) -> Result<usize, GenError> {
    if d < 2 {
        return Err(GenError::DegreeOutOfRange { d });
    }
    if h < 1 {
        return Err(GenError::HeightOutOfRange { h });
    }
    let mut n: usize = 0;
    let mut level: usize = 1;
    for _ in 0..h {
        level = level.checked_mul(d as usize).ok_or(GenError::SizeOverflow)?;
        n = n.checked_add(level).ok_or(GenError::SizeOverflow)?;
    }
    if n >= Vertex::MAX as usize {
        return Err(GenError::SizeOverflow);
    }
    Ok(n)
}

/// Uniform random recursive tree: vertex `i` attaches to a uniform vertex
/// of `{0, ..., i-1}`, independently across `i`.
pub fn gen_recursive<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Tree, GenError> {
    if n == 0 {
        return Err(GenError::EmptyTree);
    }
    let mut parent = Vec::with_capacity(n);
    for i in 1..=n {
        parent.push(rng.gen_range(0..i) as Vertex);
    }
    Ok(Tree::from_parents_unchecked(parent))
}

/// Preferential attachment tree: starting from the single edge on `{0, 1}`,
/// vertex `m` attaches to vertex `i` with probability
/// `(degree(i) + beta) / (2 e + beta (e + 1))`, where `e = m - 1` is the
/// current edge count.
///
/// For `beta >= 0` the law is sampled by a mixture: degree-proportional
/// (a uniform entry of the edge-endpoint list) with probability
/// `2e / (2e + beta (e + 1))`, otherwise uniform over the vertices.
/// For `beta` in `(-1, 0)` it is sampled by rejection: propose
/// degree-proportionally and accept with probability
/// `(degree + beta) / degree`, which is in `(0, 1]` since degrees are >= 1.
/// Both schemes realize the attachment law exactly with O(1) expected work
/// per step.
pub fn gen_scale_free<R: Rng + ?Sized>(
    n: usize,
    beta: f64,
    rng: &mut R,
) -> Result<Tree, GenError> {
    if n == 0 {
        return Err(GenError::EmptyTree);
    }
    if !(beta > -1.0) {
        return Err(GenError::BetaOutOfRange { beta });
    }
    let mut parent: Vec<Vertex> = Vec::with_capacity(n);
    parent.push(0);
    // Every kept edge contributes both endpoints, so a uniform entry is a
    // degree-proportional vertex and the list length is always 2 * edges.
    let mut endpoints: Vec<Vertex> = Vec::with_capacity(2 * n);
    endpoints.push(0);
    endpoints.push(1);
    let mut degree: Vec<u32> = Vec::with_capacity(n + 1);
    degree.push(1);
    degree.push(1);
    for m in 2..=n {
        let edges = m - 1;
        let chosen: Vertex = if beta >= 0.0 {
            let degree_mass = 2.0 * edges as f64;
            let total = degree_mass + beta * (edges as f64 + 1.0);
            if rng.gen::<f64>() * total < degree_mass {
                endpoints[rng.gen_range(0..endpoints.len())]
            } else {
                rng.gen_range(0..=edges as Vertex)
            }
        } else {
            loop {
                let cand = endpoints[rng.gen_range(0..endpoints.len())];
                let deg = degree[cand as usize] as f64;
                if rng.gen::<f64>() * deg < deg + beta {
                    break cand;
                }
            }
        };
        parent.push(chosen);
        endpoints.push(chosen);
        endpoints.push(m as Vertex);
        degree[chosen as usize] += 1;
        degree.push(1);
        // Two endpoints per edge, so the list length carries the identity
        // "sum of degrees = 2 * edges" after every step.
        debug_assert_eq!(endpoints.len(), 2 * m);
    }
    Ok(Tree::from_parents_unchecked(parent))
}

/// Uniform labeled tree on `{0, ..., n}` via a uniform Pruefer sequence of
/// length `n - 1` over `{0, ..., n}`, decoded with a min-heap and re-rooted
/// at 0.
pub fn gen_cayley<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Tree, GenError> {
    if n == 0 {
        return Err(GenError::EmptyTree);
    }
    let verts = n + 1;
    let seq: Vec<Vertex> = (0..n.saturating_sub(1))
        .map(|_| rng.gen_range(0..verts as Vertex))
        .collect();
    let mut degree: Vec<u32> = Vec::with_capacity(verts);
    degree.resize(verts, 1);
    for &s in &seq {
        degree[s as usize] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<Vertex>> = degree
        .iter()
        .enumerate()
        .filter(|&(_, &d)| d == 1)
        .map(|(v, _)| Reverse(v as Vertex))
        .collect();
    let mut edges: Vec<(Vertex, Vertex)> = Vec::with_capacity(n);
    for &a in &seq {
        let Reverse(leaf) = leaves.pop().expect("decode invariant: a leaf exists");
        edges.push((leaf, a));
        degree[a as usize] -= 1;
        if degree[a as usize] == 1 {
            leaves.push(Reverse(a));
        }
    }
    let Reverse(u) = leaves.pop().expect("two leaves remain");
    let Reverse(v) = leaves.pop().expect("two leaves remain");
    edges.push((u, v));
    let tree = Tree::from_edges(n, &edges).expect("decoded edge set is a tree");
    Ok(tree)
}

/// Complete d-ary tree of height `h`, vertices labeled in breadth-first
/// order so that `parent[i] < i`.
pub fn gen_dary(d: u32, h: u32) -> Result<Tree, GenError> {
    let n = dary_edge_count(d, h)?;
    let mut parent = Vec::with_capacity(n);
    for i in 1..=n {
        parent.push(((i - 1) / d as usize) as Vertex);
    }
    Ok(Tree::from_parents_unchecked(parent))
}

/// Star-like tree: `max(1, floor(n^(1-alpha)))` disjoint paths hang from
/// the root, with the `n` non-root vertices split as evenly as possible
/// (branch sizes differ by at most one). Labels increase along each branch.
pub fn gen_star(n: usize, alpha: f64) -> Result<Tree, GenError> {
    if n == 0 {
        return Err(GenError::EmptyTree);
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(GenError::AlphaOutOfRange { alpha });
    }
    let raw = math::pow(n as f64, 1.0 - alpha);
    // Nudge values that should be exact integers (such as 100^(1/2)) onto
    // them before flooring, so the branch count is stable across libm
    // rounding differences.
    let nearest = math::round(raw);
    let chosen = if math::abs(raw - nearest) < 1e-9 {
        nearest
    } else {
        math::floor(raw)
    };
    let branches = (chosen as usize).clamp(1, n);
    let base = n / branches;
    let extra = n % branches;
    let mut parent: Vec<Vertex> = Vec::with_capacity(n);
    for b in 0..branches {
        let len = base + usize::from(b < extra);
        for pos in 0..len {
            let vertex = parent.len() + 1;
            parent.push(if pos == 0 { 0 } else { (vertex - 1) as Vertex });
        }
    }
    Ok(Tree::from_parents_unchecked(parent))
}
