//! Rooted trees on `{0, ..., n}` stored as parent arrays.
//!
//! Vertex 0 is always the root; a tree with `n` edges has vertex set
//! `{0, ..., n}` and stores `parent[i]` for each non-root vertex `i`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Vertex identifier. Trees up to `u32::MAX - 1` edges are representable.
pub type Vertex = u32;

/// Errors raised by tree construction, validation, and path queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeError {
    /// A stored parent points outside `{0, ..., n}`.
    ParentOutOfRange { vertex: Vertex, parent: Vertex },
    /// Following parent links from `vertex` never reaches the root.
    Cycle { vertex: Vertex },
    /// `vertex` is not connected to the root (edge-list construction).
    Orphan { vertex: Vertex },
    /// An edge list for `n` edges had the wrong length.
    EdgeCount { expected: usize, got: usize },
    /// A query vertex lies outside `{0, ..., n}`.
    VertexOutOfRange { vertex: Vertex, max: Vertex },
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TreeError::ParentOutOfRange { vertex, parent } => {
                write!(f, "vertex {vertex} has out-of-range parent {parent}")
            }
            TreeError::Cycle { vertex } => {
                write!(f, "cycle detected through vertex {vertex}")
            }
            TreeError::Orphan { vertex } => {
                write!(f, "vertex {vertex} is not connected to the root")
            }
            TreeError::EdgeCount { expected, got } => {
                write!(f, "expected {expected} edges, got {got}")
            }
            TreeError::VertexOutOfRange { vertex, max } => {
                write!(f, "vertex {vertex} out of range (max {max})")
            }
        }
    }
}

/// A rooted tree on `{0, ..., n}` with `n` edges, rooted at vertex 0.
///
/// Immutable after construction and safe to share across trial workers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    /// `parent[i - 1]` is the parent of vertex `i`, for `i` in `1..=n`.
    parent: Vec<Vertex>,
    /// True when `parent[i] < i` for every vertex, i.e. labels increase
    /// along every branch away from the root.
    increasing: bool,
}

impl Tree {
    /// Builds a tree from `parent[i - 1] = parent of vertex i`, validating
    /// connectivity and index ranges.
    pub fn from_parents(parent: Vec<Vertex>) -> Result<Self, TreeError> {
        validate_parents(&parent)?;
        Ok(Self::from_parents_unchecked(parent))
    }

    /// Builds a tree whose parent array is known to be valid
    /// (generators construct parents with `parent[i] < i` or via BFS).
    pub(crate) fn from_parents_unchecked(parent: Vec<Vertex>) -> Self {
        let increasing = parent
            .iter()
            .enumerate()
            .all(|(i, &p)| (p as usize) <= i);
        Tree { parent, increasing }
    }

    /// Builds a tree from an undirected edge list on `{0, ..., n}` by
    /// re-rooting at vertex 0 (breadth-first).
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, TreeError> {
        if edges.len() != n {
            return Err(TreeError::EdgeCount {
                expected: n,
                got: edges.len(),
            });
        }
        let verts = n + 1;
        for &(a, b) in edges {
            for v in [a, b] {
                if v as usize >= verts {
                    return Err(TreeError::VertexOutOfRange {
                        vertex: v,
                        max: n as Vertex,
                    });
                }
            }
            if a == b {
                return Err(TreeError::Cycle { vertex: a });
            }
        }
        // Adjacency in CSR form.
        let mut offset = vec![0u32; verts + 1];
        for &(a, b) in edges {
            offset[a as usize + 1] += 1;
            offset[b as usize + 1] += 1;
        }
        for i in 0..verts {
            offset[i + 1] += offset[i];
        }
        let mut adj = vec![0 as Vertex; 2 * n];
        let mut cursor = offset.clone();
        for &(a, b) in edges {
            adj[cursor[a as usize] as usize] = b;
            cursor[a as usize] += 1;
            adj[cursor[b as usize] as usize] = a;
            cursor[b as usize] += 1;
        }
        // BFS from the root; in a graph with n edges on n+1 vertices any
        // unreached vertex means disconnection.
        let mut parent = vec![Vertex::MAX; verts];
        let mut queue = Vec::with_capacity(verts);
        parent[0] = 0;
        queue.push(0 as Vertex);
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            let lo = offset[v as usize] as usize;
            let hi = offset[v as usize + 1] as usize;
            for &w in &adj[lo..hi] {
                if parent[w as usize] == Vertex::MAX {
                    parent[w as usize] = v;
                    queue.push(w);
                }
            }
        }
        if let Some(v) = parent.iter().position(|&p| p == Vertex::MAX) {
            return Err(TreeError::Orphan {
                vertex: v as Vertex,
            });
        }
        parent.remove(0);
        Ok(Self::from_parents_unchecked(parent))
    }

    /// Number of edges `n`; the vertex set is `{0, ..., n}`.
    pub fn edge_count(&self) -> usize {
        self.parent.len()
    }

    /// Number of vertices, `n + 1`.
    pub fn vertex_count(&self) -> usize {
        self.parent.len() + 1
    }

    /// Parent of `v`, or `None` for the root.
    pub fn parent_of(&self, v: Vertex) -> Option<Vertex> {
        if v == 0 {
            None
        } else {
            self.parent.get(v as usize - 1).copied()
        }
    }

    /// The raw parent array (`parents()[i]` is the parent of vertex `i + 1`).
    pub fn parents(&self) -> &[Vertex] {
        &self.parent
    }

    /// Whether `parent[i] < i` holds for every vertex, which permits
    /// single-pass algorithms over the vertex order.
    pub fn is_increasing(&self) -> bool {
        self.increasing
    }

    /// Re-checks all structural invariants.
    pub fn validate(&self) -> Result<(), TreeError> {
        validate_parents(&self.parent)
    }

    #[inline]
    pub(crate) fn parent_raw(&self, v: usize) -> usize {
        debug_assert!(v >= 1);
        self.parent[v - 1] as usize
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), TreeError> {
        if (v as usize) < self.vertex_count() {
            Ok(())
        } else {
            Err(TreeError::VertexOutOfRange {
                vertex: v,
                max: self.edge_count() as Vertex,
            })
        }
    }
}

/// Validates a raw parent array: parents in range, no cycles, every vertex
/// reaches the root. Reports the first violated invariant.
pub fn validate_parents(parent: &[Vertex]) -> Result<(), TreeError> {
    let n = parent.len();
    for (i, &p) in parent.iter().enumerate() {
        let v = (i + 1) as Vertex;
        if p as usize > n {
            return Err(TreeError::ParentOutOfRange { vertex: v, parent: p });
        }
        if p == v {
            return Err(TreeError::Cycle { vertex: v });
        }
    }
    // Chase parent links with memoization: 0 = unknown, 1 = on the current
    // path, 2 = known to reach the root.
    let mut state = vec![0u8; n + 1];
    state[0] = 2;
    let mut path: Vec<usize> = Vec::new();
    for start in 1..=n {
        if state[start] != 0 {
            continue;
        }
        let mut v = start;
        while state[v] == 0 {
            state[v] = 1;
            path.push(v);
            v = parent[v - 1] as usize;
        }
        if state[v] == 1 {
            return Err(TreeError::Cycle { vertex: v as Vertex });
        }
        for &u in &path {
            state[u] = 2;
        }
        path.clear();
    }
    Ok(())
}

/// Hop distances to the root for every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthTable {
    depth: Vec<u32>,
}

impl DepthTable {
    /// Depth of vertex `v` (0 for the root).
    #[inline]
    pub fn get(&self, v: Vertex) -> u32 {
        self.depth[v as usize]
    }

    /// Depths indexed by vertex.
    pub fn as_slice(&self) -> &[u32] {
        &self.depth
    }
}

/// Computes all vertex depths in one linear pass.
pub fn depths(tree: &Tree) -> DepthTable {
    let n = tree.edge_count();
    let mut depth = vec![u32::MAX; n + 1];
    depth[0] = 0;
    if tree.is_increasing() {
        // Parents precede children in vertex order.
        for v in 1..=n {
            depth[v] = depth[tree.parent_raw(v)] + 1;
        }
    } else {
        // Chase up to the first vertex with a known depth, then unwind.
        let mut stack: Vec<usize> = Vec::new();
        for start in 1..=n {
            let mut v = start;
            while depth[v] == u32::MAX {
                stack.push(v);
                v = tree.parent_raw(v);
            }
            let mut d = depth[v];
            while let Some(u) = stack.pop() {
                d += 1;
                depth[u] = d;
            }
        }
    }
    DepthTable { depth }
}

/// Number of edges in the union of the root-to-target paths.
///
/// Duplicate targets are allowed and have no effect. Walks up from each
/// target, marking vertices, and stops at the first marked vertex, so the
/// total work is linear in the answer after the marking array is set up.
pub fn reduced_length(tree: &Tree, targets: &[Vertex]) -> Result<usize, TreeError> {
    for &t in targets {
        tree.check_vertex(t)?;
    }
    let mut seen = vec![false; tree.vertex_count()];
    seen[0] = true;
    let mut edges = 0;
    for &t in targets {
        let mut v = t as usize;
        while !seen[v] {
            seen[v] = true;
            edges += 1;
            v = tree.parent_raw(v);
        }
    }
    Ok(edges)
}

/// Depth of the lowest common ancestor of `v1` and `v2`.
///
/// Satisfies `reduced_length({v1, v2}) = depth(v1) + depth(v2) - result`.
pub fn branchpoint_depth(
    tree: &Tree,
    table: &DepthTable,
    v1: Vertex,
    v2: Vertex,
) -> Result<u32, TreeError> {
    tree.check_vertex(v1)?;
    tree.check_vertex(v2)?;
    let mut a = v1 as usize;
    let mut b = v2 as usize;
    while table.depth[a] > table.depth[b] {
        a = tree.parent_raw(a);
    }
    while table.depth[b] > table.depth[a] {
        b = tree.parent_raw(b);
    }
    while a != b {
        a = tree.parent_raw(a);
        b = tree.parent_raw(b);
    }
    Ok(table.depth[a])
}
