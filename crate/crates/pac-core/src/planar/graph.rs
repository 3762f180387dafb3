use alloc::vec;
use alloc::vec::Vec;

/// Errors building graphs.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    /// Endpoint out of range.
    #[error("edge {0} has an endpoint out of range")]
    OutOfRange(usize),
    /// A loop.
    #[error("edge {0} is a self-loop")]
    SelfLoop(usize),
    /// A repeated edge.
    #[error("edge {0} duplicates an earlier edge")]
    Parallel(usize),
    /// A cycle in a graph required to be a forest.
    #[error("graph contains a cycle")]
    Cyclic,
}

/// Simple undirected graph with stable edge ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl UGraph {
    /// Builds a graph; edge ids follow input order. Loops and repeated
    /// edges are errors.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(GraphError::OutOfRange(i));
            }
            if u == v {
                return Err(GraphError::SelfLoop(i));
            }
        }
        let mut keys: Vec<(usize, usize, usize)> = edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| (u.min(v), u.max(v), i))
            .collect();
        keys.sort_unstable();
        for w in keys.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(GraphError::Parallel(w[1].2));
            }
        }
        Ok(Self::build(n, edges))
    }

    /// Builds the simple graph underlying a multigraph: loops are dropped and
    /// parallel edges merged, keeping first occurrences in order.
    pub fn simple(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let raw: Vec<(usize, usize)> = edges
            .into_iter()
            .filter(|&(u, v)| u != v && u < n && v < n)
            .collect();
        let mut keys: Vec<(usize, usize, usize)> = raw
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| (u.min(v), u.max(v), i))
            .collect();
        keys.sort_unstable();
        let mut keep = vec![false; raw.len()];
        for (k, w) in keys.iter().enumerate() {
            if k == 0 || (keys[k - 1].0, keys[k - 1].1) != (w.0, w.1) {
                keep[w.2] = true;
            }
        }
        let edges = raw
            .into_iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(e, _)| e)
            .collect();
        Self::build(n, edges)
    }

    fn build(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        UGraph { n, edges, adj }
    }

    /// Vertex count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge count.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edge endpoints by id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `(neighbor, edge id)` pairs of `v`.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    /// Degree of `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Other endpoint of edge `e` seen from `v`.
    pub fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Connected-component index per vertex and the component count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        self.components_without(&vec![false; self.n])
    }

    /// Components of the graph with `removed` vertices deleted; removed
    /// vertices get `usize::MAX`.
    pub fn components_without(&self, removed: &[bool]) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if removed[s] || comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for &(w, _) in &self.adj[v] {
                    if !removed[w] && comp[w] == usize::MAX {
                        comp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    /// Subgraph induced by `keep`, with the map from new to old vertex ids.
    pub fn induced(&self, keep: &[bool]) -> (UGraph, Vec<usize>) {
        let mut map = vec![usize::MAX; self.n];
        let mut back = Vec::new();
        for v in 0..self.n {
            if keep[v] {
                map[v] = back.len();
                back.push(v);
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| keep[u] && keep[v])
            .map(|&(u, v)| (map[u], map[v]))
            .collect();
        (Self::build(back.len(), edges), back)
    }

    /// Subgraph on the same vertices keeping the listed edge ids (ids renumbered
    /// in the listed order).
    pub fn edge_subgraph(&self, keep: &[usize]) -> UGraph {
        Self::build(self.n, keep.iter().map(|&e| self.edges[e]).collect())
    }

    /// Whether the graph has no cycle.
    pub fn is_forest(&self) -> bool {
        let (_, c) = self.components();
        self.m() + c == self.n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_merges_parallels() {
        let g = UGraph::simple(3, [(0, 1), (1, 0), (1, 1), (1, 2)]);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(
            UGraph::new(3, alloc::vec![(0, 1), (1, 0)]),
            Err(GraphError::Parallel(1))
        );
    }

    #[test]
    fn forest_check() {
        assert!(UGraph::new(4, alloc::vec![(0, 1), (2, 3)])
            .unwrap()
            .is_forest());
        assert!(!UGraph::new(3, alloc::vec![(0, 1), (1, 2), (2, 0)])
            .unwrap()
            .is_forest());
    }
}
