use alloc::vec::Vec;

use super::{is_planar, UGraph};

/// Which forbidden graph a witness subdivides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KuratowskiKind {
    /// K5.
    K5,
    /// K3,3.
    K33,
}

/// A subdivision of K5 or K3,3 inside a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kuratowski {
    /// K5 or K3,3.
    pub kind: KuratowskiKind,
    /// Branch vertices (degree 4 for K5, degree 3 for K3,3).
    pub branch: Vec<usize>,
    /// Edge ids of the subdivision in the input graph.
    pub edges: Vec<usize>,
}

/// Shrinks `g` to a minimal non-planar edge set and classifies it. `None`
/// when `g` is planar.
pub fn kuratowski_witness(g: &UGraph) -> Option<Kuratowski> {
    if is_planar(g) {
        return None;
    }
    let mut keep: Vec<usize> = (0..g.m()).collect();
    let mut chunk = (keep.len() / 2).max(1);
    loop {
        let mut i = 0;
        while i < keep.len() {
            let end = (i + chunk).min(keep.len());
            let trial: Vec<usize> = keep[..i].iter().chain(&keep[end..]).copied().collect();
            if !is_planar(&g.edge_subgraph(&trial)) {
                keep = trial;
            } else {
                i = end;
            }
        }
        if chunk == 1 {
            break;
        }
        chunk /= 2;
    }
    let mut deg = alloc::vec![0usize; g.n()];
    for &e in &keep {
        let (a, b) = g.edges()[e];
        deg[a] += 1;
        deg[b] += 1;
    }
    let branch: Vec<usize> = (0..g.n()).filter(|&v| deg[v] >= 3).collect();
    let kind = if branch.len() == 5 && branch.iter().all(|&v| deg[v] == 4) {
        KuratowskiKind::K5
    } else {
        debug_assert!(branch.len() == 6 && branch.iter().all(|&v| deg[v] == 3));
        KuratowskiKind::K33
    };
    Some(Kuratowski {
        kind,
        branch,
        edges: keep,
    })
}
