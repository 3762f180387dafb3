use alloc::vec;
use alloc::vec::Vec;

use super::GraphError;
use crate::util::Dsu;

/// Cyclic order of incident edge ids around every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationSystem {
    n: usize,
    edges: Vec<(usize, usize)>,
    rot: Vec<Vec<usize>>,
    pos: Vec<usize>,
}

/// A face boundary walk as a cyclic list of darts `(tail vertex, edge id)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Darts in walk order.
    pub darts: Vec<(usize, usize)>,
}

impl Face {
    /// Number of darts.
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    /// Whether the walk is empty.
    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// Vertices in walk order (with repetition).
    pub fn vertices(&self) -> Vec<usize> {
        self.darts.iter().map(|d| d.0).collect()
    }
}

impl RotationSystem {
    /// Builds a rotation system; every edge must appear exactly once around
    /// each of its endpoints.
    pub fn new(
        n: usize,
        edges: Vec<(usize, usize)>,
        rot: Vec<Vec<usize>>,
    ) -> Result<Self, GraphError> {
        if rot.len() != n {
            return Err(GraphError::OutOfRange(0));
        }
        let mut pos = vec![usize::MAX; 2 * edges.len()];
        for (v, r) in rot.iter().enumerate() {
            for (i, &e) in r.iter().enumerate() {
                let &(a, b) = edges.get(e).ok_or(GraphError::OutOfRange(e))?;
                let h = if a == v {
                    2 * e
                } else if b == v {
                    2 * e + 1
                } else {
                    return Err(GraphError::OutOfRange(e));
                };
                if pos[h] != usize::MAX {
                    return Err(GraphError::Parallel(e));
                }
                pos[h] = i;
            }
        }
        if let Some(h) = pos.iter().position(|&p| p == usize::MAX) {
            return Err(GraphError::OutOfRange(h / 2));
        }
        Ok(RotationSystem { n, edges, rot, pos })
    }

    /// Vertex count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge endpoints by id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Cyclic edge order around `v`.
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    /// Position of edge `e` in the rotation of its endpoint `v`.
    pub fn position(&self, v: usize, e: usize) -> usize {
        self.pos[self.half(v, e)]
    }

    fn half(&self, v: usize, e: usize) -> usize {
        if self.edges[e].0 == v {
            2 * e
        } else {
            2 * e + 1
        }
    }

    fn head(&self, h: usize) -> usize {
        let (a, b) = self.edges[h / 2];
        if h.is_multiple_of(2) {
            b
        } else {
            a
        }
    }

    fn tail(&self, h: usize) -> usize {
        let (a, b) = self.edges[h / 2];
        if h.is_multiple_of(2) {
            a
        } else {
            b
        }
    }

    /// Face successor of dart `h`: at the head, the edge following `h`'s edge
    /// in the rotation.
    fn next_dart(&self, h: usize) -> usize {
        let v = self.head(h);
        let r = &self.rot[v];
        let p = self.pos[h ^ 1];
        let e2 = r[(p + 1) % r.len()];
        self.half(v, e2)
    }

    /// Face id of every dart (`2e` runs along `edges[e]`, `2e+1` against it),
    /// plus the face count.
    pub fn dart_faces(&self) -> (Vec<usize>, usize) {
        let mut face = vec![usize::MAX; 2 * self.edges.len()];
        let mut count = 0;
        for start in 0..face.len() {
            if face[start] != usize::MAX {
                continue;
            }
            let mut h = start;
            while face[h] == usize::MAX {
                face[h] = count;
                h = self.next_dart(h);
            }
            count += 1;
        }
        (face, count)
    }

    /// All face boundary walks. Isolated vertices contribute none.
    pub fn faces(&self) -> Vec<Face> {
        let mut seen = vec![false; 2 * self.edges.len()];
        let mut out = Vec::new();
        for start in 0..seen.len() {
            if seen[start] {
                continue;
            }
            let mut darts = Vec::new();
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                darts.push((self.tail(h), h / 2));
                h = self.next_dart(h);
            }
            out.push(Face { darts });
        }
        out
    }

    /// Euler check per connected component: `V_i - E_i + F_i = 2`, where an
    /// isolated vertex counts as one face.
    pub fn is_planar_embedding(&self) -> bool {
        let mut dsu = Dsu::new(self.n);
        for &(a, b) in &self.edges {
            dsu.union(a, b);
        }
        let mut v = vec![0i64; self.n];
        let mut e = vec![0i64; self.n];
        let mut f = vec![0i64; self.n];
        for x in 0..self.n {
            let r = dsu.find(x);
            v[r] += 1;
            if self.rot[x].is_empty() {
                f[r] += 1;
            }
        }
        for &(a, _) in &self.edges {
            let r = dsu.find(a);
            e[r] += 1;
        }
        let (face_of, count) = self.dart_faces();
        let mut face_root = vec![usize::MAX; count];
        for (h, &fc) in face_of.iter().enumerate() {
            face_root[fc] = dsu.find(self.tail(h));
        }
        for &r in &face_root {
            f[r] += 1;
        }
        (0..self.n).all(|x| dsu.find(x) != x || v[x] - e[x] + f[x] == 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::{embed, UGraph};
    use std::prelude::v1::*;

    #[test]
    fn triangle_has_two_faces() {
        let g = UGraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let faces = embed(&g).unwrap().faces();
        assert_eq!(faces.len(), 2);
        assert!(faces.iter().all(|f| f.len() == 3));
    }

    #[test]
    fn tree_has_one_face() {
        let g = UGraph::new(5, vec![(0, 1), (0, 2), (2, 3), (2, 4)]).unwrap();
        let faces = embed(&g).unwrap().faces();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].len(), 8);
    }

    #[test]
    fn grid_three_by_three() {
        let mut e = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                let v = r * 3 + c;
                if c < 2 {
                    e.push((v, v + 1));
                }
                if r < 2 {
                    e.push((v, v + 3));
                }
            }
        }
        let g = UGraph::new(9, e).unwrap();
        let faces = embed(&g).unwrap().faces();
        assert_eq!(faces.len(), 5);
        assert_eq!(faces.iter().filter(|f| f.len() == 4).count(), 4);
        assert_eq!(faces.iter().map(Face::len).sum::<usize>(), 24);
    }

    #[test]
    fn bad_rotation_fails_euler() {
        // K4 with one vertex's rotation reversed in a way that creates a torus-like walk
        let edges = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let good = embed(&UGraph::new(4, edges.clone()).unwrap()).unwrap();
        assert!(good.is_planar_embedding());
        let mut rot: Vec<Vec<usize>> = (0..4).map(|v| good.rotation(v).to_vec()).collect();
        rot[0].swap(0, 1);
        let bad = RotationSystem::new(4, edges, rot).unwrap();
        assert!(!bad.is_planar_embedding());
    }
}
