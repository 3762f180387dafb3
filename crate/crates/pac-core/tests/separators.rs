use std::collections::BTreeSet;

use pac_core::planar::{grid_graph, random_forest, random_triangulation, UGraph};
use pac_core::separators::{
    forest_partition_tree, forest_separator, lipton_tarjan, savage_partition, turan_partition,
    uniform_weights, Label,
};
use proptest::prelude::*;

/// Canonical string of the tree containing `root` hung from `root`.
fn rooted_code(g: &UGraph, v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = g
        .neighbors(v)
        .iter()
        .filter(|&&(u, _)| u != parent)
        .map(|&(u, _)| rooted_code(g, u, v))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

fn forest_code(g: &UGraph) -> Vec<String> {
    let (comp, k) = g.components();
    let mut trees: Vec<String> = (0..k)
        .map(|c| {
            (0..g.n())
                .filter(|&v| comp[v] == c)
                .map(|r| rooted_code(g, r, usize::MAX))
                .min()
                .unwrap()
        })
        .collect();
    trees.sort();
    trees
}

/// All forests on `n` vertices up to isomorphism.
fn all_forests(n: usize) -> Vec<UGraph> {
    let mut level: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for size in 1..n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for edges in &level {
            for attach in 0..=size {
                let mut e = edges.clone();
                if attach < size {
                    e.push((attach, size));
                }
                let g = UGraph::simple(size + 1, e.clone());
                if seen.insert(forest_code(&g)) {
                    next.push(e);
                }
            }
        }
        level = next;
    }
    if n == 0 {
        return vec![UGraph::simple(0, [])];
    }
    level.into_iter().map(|e| UGraph::simple(n, e)).collect()
}

/// Whether some separator of size <= 3 exists, by trying every vertex set
/// and every two-colouring of the remaining components.
fn brute_exists(g: &UGraph, vp: &[bool]) -> bool {
    let n = g.n();
    let m = vp.iter().filter(|&&x| x).count();
    for bits in 0u32..1 << n {
        if bits.count_ones() > 3 {
            continue;
        }
        let cut: Vec<bool> = (0..n).map(|v| bits >> v & 1 == 1).collect();
        let (comp, k) = g.components_without(&cut);
        let mut items = vec![(0usize, 0usize); k];
        for v in 0..n {
            if !cut[v] {
                items[comp[v]].0 += 1;
                items[comp[v]].1 += usize::from(vp[v]);
            }
        }
        for colour in 0u32..1 << k {
            let mut bins = [(0, 0); 2];
            for (i, it) in items.iter().enumerate() {
                let s = (colour >> i & 1) as usize;
                bins[s].0 += it.0;
                bins[s].1 += it.1;
            }
            if bins.iter().all(|&(a, b)| 3 * a <= 2 * n && 3 * b <= 2 * m) {
                return true;
            }
        }
    }
    false
}

fn check_forest_result(g: &UGraph, vp: &[usize]) {
    let r = forest_separator(g, vp).unwrap_or_else(|e| panic!("{e} on {:?} / {vp:?}", g.edges()));
    assert!(r.c.len() <= 3);
    assert!(r.separates(g));
    assert!(r.balanced());
    let n = g.n();
    assert!(3 * r.a.len() <= 2 * n && 3 * r.b.len() <= 2 * n);
}

#[test]
fn forest_counts_match_known_values() {
    let counts: Vec<usize> = (1..=8).map(|n| all_forests(n).len()).collect();
    // unlabeled forests on n vertices
    assert_eq!(counts, vec![1, 2, 3, 6, 10, 20, 37, 76]);
}

#[test]
fn forest_separator_on_every_small_forest() {
    let mut failures = 0;
    for n in 1..=10 {
        for g in all_forests(n) {
            for bits in 0u32..1 << n {
                let vp: Vec<usize> = (0..n).filter(|&v| bits >> v & 1 == 1).collect();
                match forest_separator(&g, &vp) {
                    Ok(r) => {
                        assert!(r.c.len() <= 3 && r.separates(&g) && r.balanced());
                        assert!(3 * r.a.len() <= 2 * n && 3 * r.b.len() <= 2 * n);
                    }
                    Err(_) => {
                        let mask: Vec<bool> = (0..n).map(|v| bits >> v & 1 == 1).collect();
                        assert!(
                            !brute_exists(&g, &mask),
                            "missed a separator on {:?} / {vp:?}",
                            g.edges()
                        );
                        failures += 1;
                    }
                }
            }
        }
    }
    assert_eq!(failures, 0);
}

#[test]
fn forest_separator_on_random_forests() {
    for seed in 0..100u64 {
        let n = 20 + (seed as usize * 37) % 400;
        let g = random_forest(n, 1 + seed as usize % 7, seed);
        let vp: Vec<usize> = (0..n).filter(|v| (v * 7 + seed as usize) % 5 < 2).collect();
        check_forest_result(&g, &vp);
    }
}

#[test]
fn lipton_tarjan_grid_and_triangulation() {
    for g in [grid_graph(30, 30), random_triangulation(2000, 5)] {
        let r = lipton_tarjan(&g, &uniform_weights(g.n())).unwrap();
        assert!(r.separates(&g) && r.balanced() && r.within_bound());
    }
}

/// Labels `count` random vertices on each side, each label at most `k` times.
fn random_labels(n: usize, count: usize, k: usize, seed: u64) -> Vec<Option<Label>> {
    let mut labels = vec![None; n];
    let mut state = seed | 1;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state as usize
    };
    for i in 0..count {
        for side in 0..2 {
            for _ in 0..1 + next() % k {
                let v = next() % n;
                if labels[v].is_none() {
                    labels[v] = Some(if side == 0 {
                        Label::Left(i)
                    } else {
                        Label::Right(i)
                    });
                }
            }
        }
    }
    labels
}

#[test]
fn savage_on_triangulations() {
    for (n, p, seed) in [(500, 7, 1), (2000, 16, 2), (3000, 40, 3)] {
        let g = random_triangulation(n, seed);
        let vp: Vec<usize> = (0..n).filter(|v| v % 3 == 0).collect();
        let r = savage_partition(&g, &vp, p).unwrap();
        assert_eq!(r.parts.len(), p);
        assert!(r.tree.is_consistent(n) && r.tree.separations_hold(&g));
        let m = vp.len();
        assert!(r.counts.iter().all(|&c| 4 * p * c >= m && p * c <= 4 * m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn forest_separator_random(n in 1usize..200, trees in 1usize..10, seed: u64, density in 0u32..100) {
        let g = random_forest(n, trees, seed);
        let vp: Vec<usize> = (0..n).filter(|&v| (v as u64 ^ seed) % 100 < density as u64).collect();
        check_forest_result(&g, &vp);
    }

    #[test]
    fn lipton_tarjan_random_triangulation(n in 3usize..400, seed: u64) {
        let g = random_triangulation(n, seed);
        let r = lipton_tarjan(&g, &uniform_weights(n)).unwrap();
        prop_assert!(r.separates(&g) && r.balanced() && r.within_bound());
    }

    #[test]
    fn partition_tree_random(n in 2usize..300, trees in 1usize..6, seed: u64, p_raw: usize) {
        let g = random_forest(n, trees, seed);
        let vp: Vec<usize> = (0..n).filter(|&v| !(v as u64).wrapping_mul(seed | 1).is_multiple_of(3)).collect();
        prop_assume!(!vp.is_empty());
        let p = 1 + p_raw % vp.len();
        let t = forest_partition_tree(&g, &vp, p).unwrap();
        prop_assert_eq!(t.leaves.len(), p);
        prop_assert!(t.is_consistent(n) && t.separations_hold(&g) && t.leaf_ratio_holds());
        for &l in &t.leaves {
            let c = t.nodes[l].distinguished;
            prop_assert!(3 * p * c >= vp.len() && p * c <= 3 * vp.len());
        }
    }

    #[test]
    fn savage_random(n in 3usize..300, seed: u64, p_raw: usize) {
        let g = random_triangulation(n, seed);
        let vp: Vec<usize> = (0..n).filter(|&v| (v as u64 ^ seed).is_multiple_of(2)).collect();
        prop_assume!(!vp.is_empty());
        let p = 1 + p_raw % vp.len();
        let r = savage_partition(&g, &vp, p).unwrap();
        prop_assert!(r.tree.is_consistent(n) && r.tree.separations_hold(&g));
        prop_assert!((r.max_separator() as u128).pow(2) <= 3600 * n as u128);
    }

    #[test]
    fn turan_random(rows in 2usize..20, cols in 2usize..20, count in 1usize..30, k in 1usize..3, seed: u64) {
        let g = grid_graph(rows, cols);
        let labels = random_labels(g.n(), count, k, seed);
        let r = turan_partition(&g, &labels, k).unwrap();
        prop_assert_eq!(r.z0.len(), r.z0p.len());
        prop_assert!(r.separates(&g, &labels));
        prop_assert!(r.z0.len() * 9usize.pow(k as u32) >= r.s);
    }
}
