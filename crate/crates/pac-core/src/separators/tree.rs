//! Partition trees built by repeatedly splitting the leaf holding the most
//! distinguished vertices, for planar graphs and for forests.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{
    ceil_log_three_halves, forest, lt, mask, separates_subset, SeparatorError, SIDE_A, SIDE_B,
    SIDE_C,
};
use crate::planar::{is_planar, UGraph};

/// One node of a partition tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionNode {
    /// Parent node id; `None` at the root.
    pub parent: Option<usize>,
    /// Child node ids; empty for leaves.
    pub children: Vec<usize>,
    /// Distance from the root.
    pub depth: usize,
    /// Vertices of this node (`V_α`), sorted.
    pub vertices: Vec<usize>,
    /// Vertices still connected inside the node (`W_α`), sorted.
    pub working: Vec<usize>,
    /// Earlier separator vertices handed to this node (`U_α`), sorted.
    pub attached: Vec<usize>,
    /// Union of the separators of all ancestors (`S_α`), sorted.
    pub separator: Vec<usize>,
    /// Separator used to split this node (`C_α`); empty for leaves.
    pub cut: Vec<usize>,
    /// Distinguished vertices in `V_α`.
    pub distinguished: usize,
}

/// A binary partition tree; node 0 is the root, labelled with all vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTree {
    /// Nodes by id, in creation order.
    pub nodes: Vec<PartitionNode>,
    /// Leaf ids in increasing order.
    pub leaves: Vec<usize>,
    /// Size of the distinguished subset.
    pub total_distinguished: usize,
}

impl PartitionTree {
    /// Whether children partition their parent and the leaves partition
    /// `0..n`.
    pub fn is_consistent(&self, n: usize) -> bool {
        if self.nodes.first().map(|r| r.vertices.len()) != Some(n) {
            return false;
        }
        let inner_ok = self.nodes.iter().all(|node| {
            if node.children.is_empty() {
                return true;
            }
            let mut joined: Vec<usize> = node
                .children
                .iter()
                .flat_map(|&c| self.nodes[c].vertices.iter().copied())
                .collect();
            joined.sort_unstable();
            joined == node.vertices
        });
        let mut all: Vec<usize> = self
            .leaves
            .iter()
            .flat_map(|&l| self.nodes[l].vertices.iter().copied())
            .collect();
        all.sort_unstable();
        inner_ok && all == (0..n).collect::<Vec<_>>()
    }

    /// Whether every `S_α` cuts `V_α` off from the rest of `g`.
    pub fn separations_hold(&self, g: &UGraph) -> bool {
        self.nodes.iter().all(|node| {
            let inside = mask(g.n(), &node.vertices).expect("vertex ids in range");
            let cut = mask(g.n(), &node.separator).expect("vertex ids in range");
            separates_subset(g, &inside, &cut)
        })
    }

    /// Whether any two leaves differ in distinguished count by at most a
    /// factor of three.
    pub fn leaf_ratio_holds(&self) -> bool {
        let counts = self.leaves.iter().map(|&l| self.nodes[l].distinguished);
        let (lo, hi) = counts.fold((usize::MAX, 0), |(lo, hi), c| (lo.min(c), hi.max(c)));
        self.leaves.is_empty() || hi <= 3 * lo
    }

    /// Largest `|S_α|` over all nodes.
    pub fn max_separator(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.separator.len())
            .max()
            .unwrap_or(0)
    }

    /// Depth of the deepest node.
    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }
}

/// A `p`-way partition of a planar graph with per-part separators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPartitionResult {
    /// Parts `V_1..V_p`, each sorted.
    pub parts: Vec<Vec<usize>>,
    /// Separators `S_1..S_p`, each sorted.
    pub separators: Vec<Vec<usize>>,
    /// Distinguished vertices per part.
    pub counts: Vec<usize>,
    /// The partition tree the parts are the leaves of.
    pub tree: PartitionTree,
}

impl MultiPartitionResult {
    /// Largest separator size.
    pub fn max_separator(&self) -> usize {
        self.separators.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Builds the tree; `splitter` sides the induced subgraph on `W_α` given
/// the distinguished mask restricted to it.
fn build<F>(
    g: &UGraph,
    inv: &[bool],
    p: usize,
    mut splitter: F,
) -> Result<PartitionTree, SeparatorError>
where
    F: FnMut(&UGraph, &[bool]) -> Result<Vec<u8>, SeparatorError>,
{
    let n = g.n();
    let m = inv.iter().filter(|&&x| x).count();
    if p == 0 || p > m {
        return Err(SeparatorError::PartCount { p, max: m });
    }
    let count = |set: &[usize]| set.iter().filter(|&&v| inv[v]).count();
    let all: Vec<usize> = (0..n).collect();
    let mut nodes = vec![PartitionNode {
        parent: None,
        children: Vec::new(),
        depth: 0,
        vertices: all.clone(),
        working: all,
        attached: Vec::new(),
        separator: Vec::new(),
        cut: Vec::new(),
        distinguished: m,
    }];
    let mut leaves = vec![0usize];
    while leaves.len() < p {
        // heaviest leaf, smallest id on ties
        let (pos, &id) = leaves
            .iter()
            .enumerate()
            .max_by(|x, y| {
                nodes[*x.1]
                    .distinguished
                    .cmp(&nodes[*y.1].distinguished)
                    .then(y.1.cmp(x.1))
            })
            .expect("at least one leaf");
        let node = nodes[id].clone();
        let keep = mask(n, &node.working)?;
        let (sub, back) = g.induced(&keep);
        let sub_inv: Vec<bool> = back.iter().map(|&v| inv[v]).collect();
        let side = splitter(&sub, &sub_inv)?;
        let mut w = [Vec::new(), Vec::new()];
        let mut cut = Vec::new();
        for (i, &v) in back.iter().enumerate() {
            match side[i] {
                SIDE_A => w[0].push(v),
                SIDE_B => w[1].push(v),
                _ => cut.push(v),
            }
        }
        debug_assert!(side.iter().all(|&s| s <= SIDE_C));
        let mut u = [Vec::new(), Vec::new()];
        let mut cnt = [count(&w[0]), count(&w[1])];
        let mut size = [w[0].len(), w[1].len()];
        let mut units: Vec<usize> = node.attached.iter().chain(cut.iter()).copied().collect();
        units.sort_unstable();
        for v in units {
            let s = if inv[v] {
                usize::from(cnt[1] < cnt[0])
            } else {
                usize::from(size[1] < size[0])
            };
            cnt[s] += usize::from(inv[v]);
            size[s] += 1;
            u[s].push(v);
        }
        let mut separator: Vec<usize> = node.separator.iter().chain(cut.iter()).copied().collect();
        separator.sort_unstable();
        let first = nodes.len();
        for s in 0..2 {
            let mut vertices: Vec<usize> = w[s].iter().chain(u[s].iter()).copied().collect();
            vertices.sort_unstable();
            nodes.push(PartitionNode {
                parent: Some(id),
                children: Vec::new(),
                depth: node.depth + 1,
                distinguished: cnt[s],
                vertices,
                working: w[s].clone(),
                attached: u[s].clone(),
                separator: separator.clone(),
                cut: Vec::new(),
            });
        }
        nodes[id].children = vec![first, first + 1];
        nodes[id].cut = cut;
        leaves.swap_remove(pos);
        leaves.push(first);
        leaves.push(first + 1);
    }
    leaves.sort_unstable();
    let tree = PartitionTree {
        nodes,
        leaves,
        total_distinguished: m,
    };
    if !tree.is_consistent(n) {
        return Err(SeparatorError::Bound(
            "partition tree leaves do not partition V".into(),
        ));
    }
    if !tree.separations_hold(g) {
        return Err(SeparatorError::Bound(
            "a node is not cut off by its separator".into(),
        ));
    }
    Ok(tree)
}

/// Checks `lo_den * c >= m` and `c * hi_den <= hi_num * m`-style bounds
/// for every leaf: `|V'|/(a p) <= c <= b |V'|/p`.
fn leaf_bounds(tree: &PartitionTree, p: usize, a: usize, b: usize) -> Result<(), SeparatorError> {
    let m = tree.total_distinguished as u128;
    for &l in &tree.leaves {
        let c = tree.nodes[l].distinguished as u128;
        if (a * p) as u128 * c < m || p as u128 * c > b as u128 * m {
            return Err(SeparatorError::Bound(format!(
                "leaf {l} holds {c} of {m} distinguished vertices with p = {p}"
            )));
        }
    }
    Ok(())
}

/// Partition tree of a forest with `p` leaves, split by the forest
/// separator. Leaves hold between `|V'|/3p` and `3|V'|/p` distinguished
/// vertices and every `|S_α|` is at most `3 ceil(log_{3/2} |V'|)`.
pub fn forest_partition_tree(
    f: &UGraph,
    vp: &[usize],
    p: usize,
) -> Result<PartitionTree, SeparatorError> {
    if !f.is_forest() {
        return Err(SeparatorError::Cyclic);
    }
    let inv = mask(f.n(), vp)?;
    let tree = build(f, &inv, p, forest::split)?;
    leaf_bounds(&tree, p, 3, 3)?;
    if !tree.leaf_ratio_holds() {
        return Err(SeparatorError::Bound(
            "two leaves differ by more than a factor 3".into(),
        ));
    }
    let limit = forest::FOREST_SEPARATOR_SIZE * ceil_log_three_halves(tree.total_distinguished);
    if tree.max_separator() > limit {
        return Err(SeparatorError::Bound(format!(
            "separator of size {} exceeds {limit}",
            tree.max_separator()
        )));
    }
    Ok(tree)
}

/// `p`-way partition of a planar graph by repeated weighted separators.
/// Parts hold between `|V'|/4p` and `4|V'|/p` distinguished vertices and
/// every `|S_i|` is at most `60 sqrt|V|`.
pub fn savage_partition(
    g: &UGraph,
    vp: &[usize],
    p: usize,
) -> Result<MultiPartitionResult, SeparatorError> {
    let inv = mask(g.n(), vp)?;
    if !is_planar(g) {
        return Err(SeparatorError::NonPlanar);
    }
    let tree = build(g, &inv, p, |sub, sub_inv| {
        let w: Vec<u128> = sub_inv.iter().map(|&x| u128::from(x)).collect();
        lt::split(sub, &w)
    })?;
    leaf_bounds(&tree, p, 4, 4)?;
    let s = tree.max_separator() as u128;
    if s * s > 3600 * g.n() as u128 {
        return Err(SeparatorError::Bound(format!(
            "separator of size {s} exceeds 60 sqrt({})",
            g.n()
        )));
    }
    let leaf = |l: &usize| &tree.nodes[*l];
    Ok(MultiPartitionResult {
        parts: tree
            .leaves
            .iter()
            .map(|l| leaf(l).vertices.clone())
            .collect(),
        separators: tree
            .leaves
            .iter()
            .map(|l| leaf(l).separator.clone())
            .collect(),
        counts: tree.leaves.iter().map(|l| leaf(l).distinguished).collect(),
        tree: tree.clone(),
    })
}
