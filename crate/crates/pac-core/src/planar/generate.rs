//! Graph families used by tests, benchmarks and the CLI.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::Rng;

use super::UGraph;
use crate::util::rng;

/// The `rows x cols` grid graph; vertex `(r, c)` is `r * cols + c`.
pub fn grid_graph(rows: usize, cols: usize) -> UGraph {
    let mut e = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                e.push((v, v + 1));
            }
            if r + 1 < rows {
                e.push((v, v + cols));
            }
        }
    }
    UGraph::simple(rows * cols, e)
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn path_graph(n: usize) -> UGraph {
    UGraph::simple(n, (1..n).map(|v| (v - 1, v)))
}

/// Star with center 0 and `leaves` leaves.
pub fn star_graph(leaves: usize) -> UGraph {
    UGraph::simple(leaves + 1, (1..=leaves).map(|v| (0, v)))
}

/// Heap-ordered binary tree on `n` vertices (parent of `v` is `(v - 1) / 2`).
pub fn binary_tree(n: usize) -> UGraph {
    UGraph::simple(n, (1..n).map(|v| ((v - 1) / 2, v)))
}

/// Random maximal planar graph on `n >= 3` vertices, grown from a triangle
/// by splitting random faces and random edges.
pub fn random_triangulation(n: usize, seed: u64) -> UGraph {
    assert!(n >= 3, "a triangulation needs three vertices");
    let mut r = rng(seed);
    // oriented triangles; every directed edge lies on exactly one of them
    let mut faces: Vec<[usize; 3]> = Vec::with_capacity(2 * n);
    let mut owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let set = |faces: &mut Vec<[usize; 3]>,
               owner: &mut BTreeMap<(usize, usize), usize>,
               slot: Option<usize>,
               t: [usize; 3]| {
        let id = match slot {
            Some(i) => {
                faces[i] = t;
                i
            }
            None => {
                faces.push(t);
                faces.len() - 1
            }
        };
        for k in 0..3 {
            owner.insert((t[k], t[(k + 1) % 3]), id);
        }
    };
    set(&mut faces, &mut owner, None, [0, 1, 2]);
    set(&mut faces, &mut owner, None, [0, 2, 1]);
    for v in 3..n {
        let f = r.gen_range(0..faces.len());
        let [a, b, c] = faces[f];
        // split edge (a, b) shared with the face (b, a, d), unless the graph is a triangle
        let g = owner[&(b, a)];
        let d = faces[g]
            .iter()
            .copied()
            .find(|&x| x != a && x != b)
            .expect("third corner");
        if d != c && r.gen_bool(0.4) {
            owner.remove(&(a, b));
            owner.remove(&(b, a));
            set(&mut faces, &mut owner, Some(f), [a, v, c]);
            set(&mut faces, &mut owner, None, [v, b, c]);
            set(&mut faces, &mut owner, Some(g), [b, v, d]);
            set(&mut faces, &mut owner, None, [v, a, d]);
        } else {
            set(&mut faces, &mut owner, Some(f), [a, b, v]);
            set(&mut faces, &mut owner, None, [b, c, v]);
            set(&mut faces, &mut owner, None, [c, a, v]);
        }
    }
    UGraph::simple(n, owner.keys().filter(|(u, v)| u < v).copied())
}

/// Random forest on `n` vertices with about `trees` components: each new
/// vertex starts a tree or hangs below a random earlier vertex; ids are
/// shuffled afterwards.
pub fn random_forest(n: usize, trees: usize, seed: u64) -> UGraph {
    let mut r = rng(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, r.gen_range(0..=i));
    }
    let mut e = Vec::with_capacity(n);
    for v in 1..n {
        if r.gen_range(0..n) >= trees.max(1) {
            // mix shallow and deep attachment
            let lo = if r.gen_bool(0.5) {
                v.saturating_sub(3)
            } else {
                0
            };
            e.push((perm[r.gen_range(lo..v)], perm[v]));
        }
    }
    UGraph::simple(n, e)
}
