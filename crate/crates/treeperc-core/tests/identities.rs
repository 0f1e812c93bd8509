//! Structural invariants checked against independent brute-force oracles.

use std::collections::BTreeSet;

use proptest::prelude::*;

use treeperc_core::percolation::{cluster_sizes, EdgeMask};
use treeperc_core::stats::spacing_transform;
use treeperc_core::tree::{branchpoint_depth, depths, reduced_length, Tree, Vertex};

/// Component sizes by BFS over the kept edges, independent of the labeling
/// strategies inside `cluster_sizes`.
fn components_by_bfs(tree: &Tree, mask: &EdgeMask) -> (usize, Vec<usize>) {
    let verts = tree.vertex_count();
    let mut adj = vec![Vec::new(); verts];
    for v in 1..verts {
        if mask.kept()[v - 1] {
            let p = tree.parent_of(v as Vertex).unwrap() as usize;
            adj[v].push(p);
            adj[p].push(v);
        }
    }
    let mut seen = vec![false; verts];
    let mut root_size = 0;
    let mut others = Vec::new();
    for start in 0..verts {
        if seen[start] {
            continue;
        }
        let mut queue = vec![start];
        seen[start] = true;
        let mut size = 0;
        while let Some(v) = queue.pop() {
            size += 1;
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push(w);
                }
            }
        }
        if start == 0 {
            root_size = size;
        } else {
            others.push(size);
        }
    }
    others.sort_unstable_by(|a, b| b.cmp(a));
    (root_size, others)
}

/// Number of edges in the union of root paths, by explicit path sets.
fn reduced_by_path_union(tree: &Tree, targets: &[Vertex]) -> usize {
    let mut edges = BTreeSet::new();
    for &t in targets {
        let mut v = t;
        while v != 0 {
            edges.insert(v);
            v = tree.parent_of(v).unwrap();
        }
    }
    edges.len()
}

/// Parent arrays with `parent[i] < i`, i.e. arbitrary increasing trees.
fn increasing_tree(max_n: usize) -> impl Strategy<Value = Tree> {
    proptest::collection::vec(any::<u32>(), 1..=max_n).prop_map(|raw| {
        let parents = raw
            .iter()
            .enumerate()
            .map(|(i, &r)| (r as usize % (i + 1)) as u32)
            .collect();
        Tree::from_parents(parents).expect("increasing arrays are valid")
    })
}

/// Uniform labeled trees; their BFS re-rooting usually breaks the
/// increasing-label property, exercising the union-find path.
fn cayley_tree(n: usize) -> impl Strategy<Value = Tree> {
    use rand_chacha::rand_core::SeedableRng;
    any::<u64>().prop_map(move |seed| {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        treeperc_core::generate::gen_cayley(n, &mut rng).expect("n >= 1")
    })
}

proptest! {
    #[test]
    fn cluster_sizes_match_bfs_oracle_on_cayley_trees(
        tree in cayley_tree(25),
        mask_bits in proptest::collection::vec(any::<bool>(), 25),
    ) {
        let mask = EdgeMask::new(mask_bits.clone());
        let out = cluster_sizes(&tree, &mask);
        let (root, others) = components_by_bfs(&tree, &mask);
        prop_assert_eq!(out.root_cluster_size, root);
        prop_assert_eq!(out.ranked_sizes, others);
    }

    #[test]
    fn cluster_sizes_match_bfs_oracle(
        tree in increasing_tree(40),
        mask_bits in proptest::collection::vec(any::<bool>(), 40),
    ) {
        let n = tree.edge_count();
        let mask = EdgeMask::new(mask_bits[..n].to_vec());
        let out = cluster_sizes(&tree, &mask);
        let (root, others) = components_by_bfs(&tree, &mask);
        prop_assert_eq!(out.root_cluster_size, root);
        prop_assert_eq!(&out.ranked_sizes, &others);
        prop_assert_eq!(out.cluster_count, 1 + others.len());
        // Partition and count identities.
        prop_assert_eq!(
            out.root_cluster_size + out.ranked_sizes.iter().sum::<usize>(),
            tree.vertex_count()
        );
        prop_assert_eq!(out.cluster_count, 1 + (n - mask.kept_count()));
    }

    #[test]
    fn reduced_length_matches_path_union_oracle(
        tree in increasing_tree(24),
        raw_targets in proptest::collection::vec(0usize..1000, 1..6),
    ) {
        let n = tree.edge_count();
        let targets: Vec<Vertex> =
            raw_targets.iter().map(|&t| (t % (n + 1)) as Vertex).collect();
        let got = reduced_length(&tree, &targets).unwrap();
        prop_assert_eq!(got, reduced_by_path_union(&tree, &targets));

        // Pairwise identity with the branch point.
        let table = depths(&tree);
        let (a, b) = (targets[0], targets[targets.len() - 1]);
        let l2 = reduced_length(&tree, &[a, b]).unwrap();
        let bp = branchpoint_depth(&tree, &table, a, b).unwrap();
        prop_assert_eq!(l2 as u32, table.get(a) + table.get(b) - bp);
    }

    #[test]
    fn spacings_recover_their_cumulative_sums(
        raw in proptest::collection::vec(1e-6f64..1e3, 1..10),
    ) {
        let mut acc = 0.0;
        let ranked: Vec<f64> = raw.iter().map(|&e| { acc += e; 1.0 / acc }).collect();
        let back = spacing_transform(&ranked).unwrap();
        for (orig, got) in raw.iter().zip(back) {
            prop_assert!((orig - got).abs() <= 1e-7 * orig.max(1.0));
        }
    }
}
