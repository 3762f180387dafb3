//! Planarization: maximal planar subgraph, then dual shortest-path insertion
//! of the remaining edges with one dummy vertex per crossing.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::{embed, is_planar, RotationSystem, UGraph};
use crate::util::{rng, Dsu, Rng};

/// How a drawing was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DrawingRoute {
    /// Planar subgraph plus edge insertion.
    Insertion,
    /// Two-page topological book drawing (directed fallback).
    Book,
}

/// A planarized graph: original vertices `0..n`, then one dummy vertex per
/// crossing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Drawing {
    /// Vertex count of the input.
    pub original_vertices: usize,
    /// Input edges (tail, head in the directed case).
    pub original_edges: Vec<(usize, usize)>,
    /// The planarized graph.
    pub graph: UGraph,
    /// For dummy `n + i`, the two input edge ids crossing there.
    pub dummies: Vec<(usize, usize)>,
    /// Per input edge, its vertex path in `graph` from first to second endpoint.
    pub paths: Vec<Vec<usize>>,
    /// A planar embedding of `graph`.
    pub rotation: RotationSystem,
    /// Construction route.
    pub route: DrawingRoute,
}

impl Drawing {
    /// Number of crossings.
    pub fn crossings(&self) -> usize {
        self.dummies.len()
    }

    /// Graphviz rendering of the planarized graph; dummies are points.
    pub fn to_dot(&self) -> String {
        let n = self.original_vertices;
        let mut out = String::from("graph drawing {\n");
        for v in 0..self.graph.n() {
            if v < n {
                out.push_str(&format!("  v{v} [label=\"{v}\"];\n"));
            } else {
                out.push_str(&format!("  v{v} [shape=point];\n"));
            }
        }
        for &(a, b) in self.graph.edges() {
            out.push_str(&format!("  v{a} -- v{b};\n"));
        }
        out.push_str("}\n");
        out
    }

    /// Edges recovered by deleting dummies and rejoining edge halves.
    pub fn recover(&self) -> Vec<(usize, usize)> {
        let n = self.original_vertices;
        self.paths
            .iter()
            .map(|p| {
                let (a, b) = (p[0], p[p.len() - 1]);
                debug_assert!(p[1..p.len() - 1].iter().all(|&d| d >= n));
                (a, b)
            })
            .collect()
    }

    /// Structural self-check: every path uses graph edges, every dummy lies on
    /// exactly its two edges' paths, and the graph is planar.
    pub fn verify(&self) -> bool {
        let n = self.original_vertices;
        let mut keys: Vec<(usize, usize)> = self
            .graph
            .edges()
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        keys.sort_unstable();
        let mut seen = vec![Vec::new(); self.dummies.len()];
        for (e, p) in self.paths.iter().enumerate() {
            if p.len() < 2 || (p[0], p[p.len() - 1]) != self.original_edges[e] {
                return false;
            }
            for w in p.windows(2) {
                if keys
                    .binary_search(&(w[0].min(w[1]), w[0].max(w[1])))
                    .is_err()
                {
                    return false;
                }
            }
            for &d in &p[1..p.len() - 1] {
                if d < n {
                    return false;
                }
                seen[d - n].push(e);
            }
        }
        let used: usize = self.paths.iter().map(|p| p.len() - 1).sum();
        used == self.graph.m()
            && seen.iter().zip(&self.dummies).all(|(s, &(a, b))| {
                s.len() == 2 && ((s[0] == a && s[1] == b) || (s[0] == b && s[1] == a))
            })
            && self.rotation.is_planar_embedding()
            && is_planar(&self.graph)
    }
}

#[derive(Clone, Copy, Debug)]
struct Seg {
    a: usize,
    b: usize,
    owner: usize,
    alive: bool,
}

/// Incremental drawing: live segments plus a rotation of segment ids at every
/// vertex that is updated in place, so earlier crossings stay crossings.
struct Engine {
    n: usize,
    nv: usize,
    arcs: Vec<(usize, usize)>,
    protected: Vec<bool>,
    ranked: Vec<bool>,
    directed: bool,
    segs: Vec<Seg>,
    rot: Vec<Vec<usize>>,
    paths: Vec<Vec<usize>>,
    dummies: Vec<(usize, usize)>,
}

/// A dual path: faces visited and segments crossed between them.
struct Route {
    faces: Vec<usize>,
    crossed: Vec<usize>,
}

/// Undirected planarization. Planar inputs get zero dummies.
pub fn planarize_graph(g: &UGraph, seed: u64) -> Drawing {
    let arcs = g.edges().to_vec();
    let protected = vec![false; arcs.len()];
    let mut r = rng(seed);
    let mut e = Engine::new(g.n(), arcs, protected, false);
    e.run(&mut r).expect("undirected insertion always succeeds")
}

/// Planarization of a DAG whose drawing stays acyclic when every dummy is
/// read as a vertex with both incoming halves before both outgoing halves.
/// Crossings are placed at consistent times along a topological order; when
/// no such route exists a two-page book drawing is used. `protected` arcs
/// are never crossed. Arcs must be distinct.
pub fn planarize_dag(n: usize, arcs: &[(usize, usize)], protected: &[bool], seed: u64) -> Drawing {
    assert_eq!(arcs.len(), protected.len());
    let mut dsu = Dsu::new(n);
    for &(a, b) in arcs {
        dsu.union(a, b);
    }
    let mut comp_arcs: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &(a, _)) in arcs.iter().enumerate() {
        comp_arcs.entry(dsu.find(a)).or_default().push(i);
    }
    if comp_arcs.len() <= 1 {
        return dag_component(n, arcs, protected, seed);
    }
    // draw components side by side
    let mut local = vec![usize::MAX; n];
    let mut edges = Vec::new();
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut dummies = Vec::new();
    let mut paths = vec![Vec::new(); arcs.len()];
    let mut route = DrawingRoute::Insertion;
    for (t, ids) in comp_arcs.values().enumerate() {
        let mut verts: Vec<usize> = ids.iter().flat_map(|&i| [arcs[i].0, arcs[i].1]).collect();
        verts.sort_unstable();
        verts.dedup();
        for (k, &v) in verts.iter().enumerate() {
            local[v] = k;
        }
        let sub: Vec<(usize, usize)> = ids
            .iter()
            .map(|&i| (local[arcs[i].0], local[arcs[i].1]))
            .collect();
        let prot: Vec<bool> = ids.iter().map(|&i| protected[i]).collect();
        let d = dag_component(
            verts.len(),
            &sub,
            &prot,
            seed ^ (t as u64).wrapping_mul(0x9e37_79b9),
        );
        if d.route == DrawingRoute::Book {
            route = DrawingRoute::Book;
        }
        let base = n + dummies.len();
        let nc = verts.len();
        let global = |x: usize| if x < nc { verts[x] } else { base + x - nc };
        rot.resize(base + d.dummies.len(), Vec::new());
        let e0 = edges.len();
        edges.extend(d.graph.edges().iter().map(|&(a, b)| (global(a), global(b))));
        for x in 0..d.graph.n() {
            rot[global(x)] = d.rotation.rotation(x).iter().map(|&e| e0 + e).collect();
        }
        dummies.extend(d.dummies.iter().map(|&(a, b)| (ids[a], ids[b])));
        for (k, p) in d.paths.iter().enumerate() {
            paths[ids[k]] = p.iter().map(|&x| global(x)).collect();
        }
    }
    let nv = n + dummies.len();
    let graph = UGraph::new(nv, edges.clone()).expect("components are simple");
    let rotation = RotationSystem::new(nv, edges, rot).expect("component rotations");
    Drawing {
        original_vertices: n,
        original_edges: arcs.to_vec(),
        graph,
        dummies,
        paths,
        rotation,
        route,
    }
}

fn dag_component(n: usize, arcs: &[(usize, usize)], protected: &[bool], seed: u64) -> Drawing {
    let mut r = rng(seed);
    for _ in 0..DAG_ATTEMPTS {
        let mut e = Engine::new(n, arcs.to_vec(), protected.to_vec(), true);
        if let Some(d) = e.run(&mut r) {
            return d;
        }
    }
    book_drawing(n, arcs, protected, &mut r)
}

/// Insertion attempts (fresh planar subsets) before the book fallback.
const DAG_ATTEMPTS: usize = 8;

impl Engine {
    fn new(n: usize, arcs: Vec<(usize, usize)>, protected: Vec<bool>, directed: bool) -> Self {
        let m = arcs.len();
        Engine {
            n,
            nv: n,
            arcs,
            protected,
            ranked: vec![true; m],
            directed,
            segs: Vec::new(),
            rot: vec![Vec::new(); n],
            paths: vec![Vec::new(); m],
            dummies: Vec::new(),
        }
    }

    fn choose_planar_subset(&self, r: &mut Rng) -> (Vec<usize>, Vec<usize>) {
        let m = self.arcs.len();
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(r);
        let mut dsu = Dsu::new(self.n);
        let mut first: Vec<usize> = Vec::new();
        let mut forest: Vec<usize> = Vec::new();
        let mut rest: Vec<usize> = Vec::new();
        for &i in &order {
            if self.protected[i] {
                first.push(i);
                dsu.union(self.arcs[i].0, self.arcs[i].1);
            }
        }
        for &i in &order {
            if self.protected[i] {
                continue;
            }
            if dsu.union(self.arcs[i].0, self.arcs[i].1) {
                forest.push(i);
            } else {
                rest.push(i);
            }
        }
        first.extend(forest);
        let base = UGraph::simple(self.n, first.iter().map(|&i| self.arcs[i]));
        assert!(
            is_planar(&base),
            "protected edges and a spanning forest must be planar"
        );
        let mut accepted = first;
        let mut rejected = Vec::new();
        self.greedy_add(&mut accepted, &mut rejected, &rest);
        (accepted, rejected)
    }

    fn greedy_add(&self, accepted: &mut Vec<usize>, rejected: &mut Vec<usize>, batch: &[usize]) {
        if batch.is_empty() {
            return;
        }
        let trial = UGraph::simple(self.n, accepted.iter().chain(batch).map(|&i| self.arcs[i]));
        if is_planar(&trial) {
            accepted.extend_from_slice(batch);
        } else if batch.len() == 1 {
            rejected.push(batch[0]);
        } else {
            let mid = batch.len() / 2;
            self.greedy_add(accepted, rejected, &batch[..mid]);
            self.greedy_add(accepted, rejected, &batch[mid..]);
        }
    }

    fn run(&mut self, r: &mut Rng) -> Option<Drawing> {
        let (accepted, rejected) = self.choose_planar_subset(r);
        let base = UGraph::new(self.n, accepted.iter().map(|&i| self.arcs[i]).collect())
            .expect("arcs are distinct");
        let emb = embed(&base).expect("accepted set is planar");
        for &i in &accepted {
            self.push_arc(i);
        }
        for v in 0..self.n {
            self.rot[v] = emb.rotation(v).to_vec();
        }
        self.insert_all(&rejected)?;
        Some(self.finish(DrawingRoute::Insertion))
    }

    fn push_arc(&mut self, i: usize) -> usize {
        let (a, b) = self.arcs[i];
        self.segs.push(Seg {
            a,
            b,
            owner: i,
            alive: true,
        });
        self.paths[i] = vec![a, b];
        self.segs.len() - 1
    }

    fn insert_all(&mut self, rejected: &[usize]) -> Option<()> {
        for (k, &i) in rejected.iter().enumerate() {
            let route = self.route(i, &rejected[k + 1..])?;
            self.insert(i, &route);
        }
        Some(())
    }

    fn finish(&self, route: DrawingRoute) -> Drawing {
        let (graph, rotation) = self.export();
        Drawing {
            original_vertices: self.n,
            original_edges: self.arcs.clone(),
            graph,
            dummies: self.dummies.clone(),
            paths: self.paths.clone(),
            rotation,
            route,
        }
    }

    fn export(&self) -> (UGraph, RotationSystem) {
        let mut id = vec![usize::MAX; self.segs.len()];
        let mut edges = Vec::new();
        for (s, seg) in self.segs.iter().enumerate() {
            if seg.alive {
                id[s] = edges.len();
                edges.push((seg.a, seg.b));
            }
        }
        let rot = self
            .rot
            .iter()
            .map(|l| l.iter().map(|&s| id[s]).collect())
            .collect();
        let graph = UGraph::new(self.nv, edges.clone()).expect("drawing is simple");
        let rotation =
            RotationSystem::new(self.nv, edges, rot).expect("rotation covers every half-edge");
        (graph, rotation)
    }

    fn head(&self, dart: usize) -> usize {
        let s = self.segs[dart / 2];
        if dart.is_multiple_of(2) {
            s.b
        } else {
            s.a
        }
    }

    /// Face id per dart (`2s` runs a to b, `2s + 1` runs b to a).
    fn dart_faces(&self) -> (Vec<usize>, usize) {
        let nd = 2 * self.segs.len();
        let mut pos = vec![0usize; nd];
        for (v, list) in self.rot.iter().enumerate() {
            for (i, &s) in list.iter().enumerate() {
                let side = usize::from(self.segs[s].a != v);
                pos[2 * s + side] = i;
            }
        }
        const NONE: usize = usize::MAX;
        let mut face = vec![NONE; nd];
        let mut count = 0;
        for start in 0..nd {
            if !self.segs[start / 2].alive || face[start] != NONE {
                continue;
            }
            let mut d = start;
            while face[d] == NONE {
                face[d] = count;
                let y = self.head(d);
                let s = d / 2;
                let side = usize::from(self.segs[s].a != y);
                let list = &self.rot[y];
                let t = list[(pos[2 * s + side] + 1) % list.len()];
                d = 2 * t + usize::from(self.segs[t].a != y);
            }
            count += 1;
        }
        (face, count)
    }

    /// A topological rank of the drawing plus `pending` arcs that leaves
    /// the widest window between `u` and `v`: ancestors of `u` first, then
    /// everything unrelated to both, then `v` and its descendants.
    fn ranks(&self, pending: &[usize], u: usize, v: usize) -> Option<Vec<usize>> {
        let mut outs = vec![Vec::new(); self.nv];
        let mut ins = vec![Vec::new(); self.nv];
        let mut indeg = vec![0usize; self.nv];
        let arcs = self
            .segs
            .iter()
            .filter(|s| s.alive && self.ranked[s.owner])
            .map(|s| (s.a, s.b))
            .chain(pending.iter().map(|&i| self.arcs[i]));
        for (a, b) in arcs {
            outs[a].push(b);
            ins[b].push(a);
            indeg[b] += 1;
        }
        let mut class = vec![1u8; self.nv];
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            if class[x] != 0 {
                class[x] = 0;
                stack.extend(ins[x].iter().copied());
            }
        }
        stack.push(v);
        while let Some(x) = stack.pop() {
            if class[x] == 0 {
                return None;
            }
            if class[x] != 2 {
                class[x] = 2;
                stack.extend(outs[x].iter().copied());
            }
        }
        let mut ready: [Vec<usize>; 3] = Default::default();
        for x in (0..self.nv).rev() {
            if indeg[x] == 0 {
                ready[class[x] as usize].push(x);
            }
        }
        let mut rank = vec![0; self.nv];
        let mut next = 0;
        while let Some(x) = ready.iter_mut().find_map(|r| r.pop()) {
            rank[x] = next;
            next += 1;
            for &w in &outs[x] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready[class[w] as usize].push(w);
                }
            }
        }
        (next == self.nv).then_some(rank)
    }

    /// Shortest admissible dual path for arc `i`.
    fn route(&self, i: usize, pending: &[usize]) -> Option<Route> {
        let (u, v) = self.arcs[i];
        let (face, nf) = self.dart_faces();
        let mut rank = Vec::new();
        if self.directed {
            let mut all_pending = vec![i];
            all_pending.extend_from_slice(pending);
            rank = self.ranks(&all_pending, u, v)?;
        }
        let mut dual: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nf];
        let mut start = vec![false; nf];
        let mut target = vec![false; nf];
        for (s, seg) in self.segs.iter().enumerate() {
            if !seg.alive {
                continue;
            }
            let (f0, f1) = (face[2 * s], face[2 * s + 1]);
            for (x, f) in [(seg.a, f0), (seg.b, f1)] {
                if x == u {
                    start[f] = true;
                }
                if x == v {
                    target[f] = true;
                }
            }
            let touches = seg.a == u || seg.a == v || seg.b == u || seg.b == v;
            if f0 != f1 && !touches && !self.protected[seg.owner] {
                dual[f0].push((f1, s));
                dual[f1].push((f0, s));
            }
        }
        const INF: usize = usize::MAX;
        let mut best = vec![INF; nf];
        let mut layers: Vec<BTreeMap<usize, (usize, usize, usize)>> = Vec::new();
        let mut frontier = BTreeMap::new();
        let t0 = if self.directed { rank[u] } else { 0 };
        for f in 0..nf {
            if start[f] {
                best[f] = t0;
                frontier.insert(f, (t0, INF, INF));
            }
        }
        loop {
            if let Some((&f, _)) = frontier.iter().find(|(f, _)| target[**f]) {
                layers.push(frontier);
                let mut faces = vec![f];
                let mut crossed = Vec::new();
                let mut cur = f;
                for level in (1..layers.len()).rev() {
                    let (_, pred, s) = layers[level][&cur];
                    crossed.push(s);
                    faces.push(pred);
                    cur = pred;
                }
                faces.reverse();
                crossed.reverse();
                return Some(Route { faces, crossed });
            }
            if frontier.is_empty() {
                assert!(
                    self.directed,
                    "dual graph of a connected drawing is connected"
                );
                return None;
            }
            let mut next: BTreeMap<usize, (usize, usize, usize)> = BTreeMap::new();
            for (&f, &(t, _, _)) in &frontier {
                for &(g, s) in &dual[f] {
                    let t2 = if self.directed {
                        let seg = self.segs[s];
                        let t2 = t.max(rank[seg.a]);
                        if t2 >= rank[seg.b] || t2 >= rank[v] {
                            continue;
                        }
                        t2
                    } else {
                        0
                    };
                    let improves = if self.directed {
                        t2 < best[g]
                    } else {
                        best[g] == INF
                    };
                    if improves {
                        best[g] = t2;
                        next.insert(g, (t2, f, s));
                    }
                }
            }
            layers.push(frontier);
            frontier = next;
        }
    }

    /// Segment after which a new edge enters face `f` at vertex `x`.
    fn corner(&self, face: &[usize], x: usize, f: usize) -> usize {
        self.rot[x]
            .iter()
            .copied()
            .find(|&s| {
                let into = 2 * s + usize::from(self.segs[s].a == x);
                face[into] == f
            })
            .expect("vertex lies on the face")
    }

    fn insert_after(&mut self, x: usize, after: usize, s: usize) {
        let at = self.rot[x]
            .iter()
            .position(|&t| t == after)
            .expect("segment at vertex");
        self.rot[x].insert(at + 1, s);
    }

    fn insert(&mut self, i: usize, route: &Route) {
        let (u, v) = self.arcs[i];
        let (face, _) = self.dart_faces();
        let k = route.crossed.len();
        let at_u = self.corner(&face, u, route.faces[0]);
        let at_v = self.corner(&face, v, route.faces[k]);
        let base = self.segs.len();
        let path_seg = |j: usize| base + 2 * k + j;
        let mut path = vec![u];
        let mut new_segs = Vec::with_capacity(3 * k + 1);
        for (c, &s) in route.crossed.iter().enumerate() {
            let seg = self.segs[s];
            let d = self.nv;
            self.nv += 1;
            self.segs[s].alive = false;
            let (s1, s2) = (base + 2 * c, base + 2 * c + 1);
            new_segs.push(Seg {
                a: seg.a,
                b: d,
                owner: seg.owner,
                alive: true,
            });
            new_segs.push(Seg {
                a: d,
                b: seg.b,
                owner: seg.owner,
                alive: true,
            });
            for (x, r) in [(seg.a, s1), (seg.b, s2)] {
                let at = self.rot[x]
                    .iter()
                    .position(|&t| t == s)
                    .expect("segment at endpoint");
                self.rot[x][at] = r;
            }
            let (inc, out) = (path_seg(c), path_seg(c + 1));
            let rot = if face[2 * s] == route.faces[c] {
                vec![s1, inc, s2, out]
            } else {
                vec![s1, out, s2, inc]
            };
            self.rot.push(rot);
            let p = &mut self.paths[seg.owner];
            let at = p
                .windows(2)
                .position(|w| (w[0], w[1]) == (seg.a, seg.b))
                .expect("segment lies on its owner's path");
            p.insert(at + 1, d);
            self.dummies.push((seg.owner, i));
            path.push(d);
        }
        path.push(v);
        for w in path.windows(2) {
            new_segs.push(Seg {
                a: w[0],
                b: w[1],
                owner: i,
                alive: true,
            });
        }
        self.segs.extend(new_segs);
        self.insert_after(u, at_u, path_seg(0));
        self.insert_after(v, at_v, path_seg(k));
        self.paths[i] = path;
    }
}

/// Directed planarization inside a disk whose boundary carries `ports` in
/// the given cyclic order. Vertices are `0..n`; arcs must not join two
/// ports. Returns `None` when some arc has no time-consistent route.
pub fn planarize_disk(
    n: usize,
    ports: &[usize],
    arcs: &[(usize, usize)],
    seed: u64,
) -> Option<Drawing> {
    let mut r = rng(seed);
    let hub = n;
    let k = ports.len();
    let inner = arcs.len();
    let mut all = arcs.to_vec();
    if k >= 3 {
        all.extend((0..k).map(|i| (ports[i], ports[(i + 1) % k])));
    } else if k == 2 {
        all.push((ports[0], ports[1]));
    }
    let frame_end = all.len();
    all.extend(ports.iter().map(|&p| (hub, p)));
    let m = all.len();
    let mut protected = vec![false; m];
    protected[inner..].iter_mut().for_each(|p| *p = true);
    let mut e = Engine::new(n + 1, all, protected, true);
    e.ranked[inner..].iter_mut().for_each(|p| *p = false);
    let wheel = UGraph::new(n + 1, e.arcs[inner..].to_vec()).expect("ports are distinct");
    let emb = embed(&wheel).expect("a wheel is planar");
    for i in inner..m {
        e.push_arc(i);
    }
    for v in 0..=n {
        e.rot[v] = emb.rotation(v).to_vec();
    }
    // interior face: the side of the first frame arc away from the hub
    let interior = |face: &[usize]| -> usize {
        if k >= 3 {
            let hub_faces: Vec<usize> = (frame_end - inner..m - inner)
                .map(|t| face[2 * t])
                .collect();
            if hub_faces.contains(&face[0]) {
                face[1]
            } else {
                face[0]
            }
        } else {
            face[0]
        }
    };
    let mut placed = vec![false; n + 1];
    placed[hub] = true;
    for &p in ports {
        placed[p] = true;
    }
    let mut adj = vec![Vec::new(); n];
    for (i, &(a, b)) in arcs.iter().enumerate() {
        adj[a].push(i);
        adj[b].push(i);
    }
    for l in adj.iter_mut() {
        l.shuffle(&mut r);
    }
    let mut used = vec![false; inner];
    let mut queue: Vec<usize> = ports.to_vec();
    queue.shuffle(&mut r);
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for &i in &adj[x] {
            let (a, b) = arcs[i];
            let y = if a == x { b } else { a };
            if placed[y] {
                continue;
            }
            let (face, _) = e.dart_faces();
            let inside = interior(&face);
            let s = e.push_arc(i);
            match e.rot[x]
                .iter()
                .position(|&t| face[2 * t + usize::from(e.segs[t].a == x)] == inside)
            {
                Some(at) => e.rot[x].insert(at + 1, s),
                None => e.rot[x].push(s),
            }
            e.rot[y].push(s);
            placed[y] = true;
            used[i] = true;
            queue.push(y);
        }
    }
    if (0..inner).any(|i| !placed[arcs[i].0] || !placed[arcs[i].1]) {
        return None;
    }
    let mut rejected: Vec<usize> = (0..inner).filter(|&i| !used[i]).collect();
    rejected.shuffle(&mut r);
    e.insert_all(&rejected)?;
    Some(e.finish(DrawingRoute::Insertion))
}

/// Two-page topological book drawing: spine order is a topological order
/// keeping each protected arc's endpoints adjacent, arcs are semicircles,
/// and crossings are ordered along each arc by exact x-coordinate.
fn book_drawing(n: usize, arcs: &[(usize, usize)], protected: &[bool], r: &mut Rng) -> Drawing {
    let mut outs = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    let mut partner = vec![usize::MAX; n];
    for (i, &(a, b)) in arcs.iter().enumerate() {
        outs[a].push(b);
        indeg[b] += 1;
        if protected[i] {
            partner[a] = b;
        }
    }
    let mut ready: Vec<usize> = (0..n).rev().filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    let mut forced: Option<usize> = None;
    while let Some(v) = forced.take().or_else(|| ready.pop()) {
        order.push(v);
        let mut follow = None;
        for &w in &outs[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                if w == partner[v] {
                    follow = Some(w);
                } else {
                    ready.push(w);
                }
            }
        }
        forced = follow;
    }
    assert_eq!(order.len(), n, "book drawing needs a DAG");
    let mut rank = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let m = arcs.len();
    let span = |i: usize| {
        let (a, b) = arcs[i];
        (rank[a], rank[b])
    };
    let cross = |i: usize, j: usize| {
        let ((a, b), (c, d)) = (span(i), span(j));
        (a < c && c < b && b < d) || (c < a && a < d && d < b)
    };
    let mut by_len: Vec<usize> = (0..m).collect();
    by_len.sort_by_key(|&i| {
        let (a, b) = span(i);
        (core::cmp::Reverse(b - a), i)
    });
    let mut page = vec![0u8; m];
    let mut placed: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for &i in &by_len {
        let c0 = placed[0].iter().filter(|&&j| cross(i, j)).count();
        let c1 = placed[1].iter().filter(|&&j| cross(i, j)).count();
        let p = if c1 < c0 { 1 } else { 0 };
        page[i] = p as u8;
        placed[p].push(i);
    }
    let mut pairs = Vec::new();
    for p in 0..2 {
        let list = &placed[p];
        for x in 0..list.len() {
            for y in x + 1..list.len() {
                let (i, j) = (list[x], list[y]);
                if cross(i, j) {
                    pairs.push((i.min(j), i.max(j)));
                }
            }
        }
    }
    pairs.sort_unstable();
    assert!(n < 1 << 20, "book drawing coordinates overflow");
    loop {
        let pos: Vec<i128> = (0..n)
            .map(|v| ((rank[v] as i128) << 20) + r.gen_range(0..1i128 << 19))
            .collect();
        let xcoord = |i: usize, j: usize| -> (i128, i128) {
            let ((a, b), (c, d)) = (arcs[i], arcs[j]);
            let (a, b, c, d) = (pos[a], pos[b], pos[c], pos[d]);
            let num = c * d - a * b;
            let den = (c + d) - (a + b);
            if den < 0 {
                (-num, -den)
            } else {
                (num, den)
            }
        };
        let mut along: Vec<Vec<(i128, i128, usize)>> = vec![Vec::new(); m];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            let (num, den) = xcoord(i, j);
            along[i].push((num, den, k));
            along[j].push((num, den, k));
        }
        let mut tie = false;
        for list in along.iter_mut() {
            list.sort_by(|x, y| (x.0 * y.1).cmp(&(y.0 * x.1)));
            if list.windows(2).any(|w| w[0].0 * w[1].1 == w[1].0 * w[0].1) {
                tie = true;
                break;
            }
        }
        if tie {
            continue;
        }
        let dummies: Vec<(usize, usize)> = pairs.clone();
        let nv = n + dummies.len();
        let mut paths = Vec::with_capacity(m);
        let mut edges = Vec::new();
        // ccw sort keys; spine vertices see vertical tangents ordered by radius,
        // crossings order by exact slope
        let mut keyed: Vec<Vec<((u8, i128), usize)>> = vec![Vec::new(); nv];
        for (i, list) in along.iter().enumerate() {
            let (a, b) = arcs[i];
            let (pa, pb) = (pos[a], pos[b]);
            let radius = pb - pa;
            let upper = page[i] == 0;
            let mut p = vec![a];
            p.extend(list.iter().map(|&(_, _, k)| n + k));
            p.push(b);
            for (j, w) in p.windows(2).enumerate() {
                let e = edges.len();
                edges.push((w[0], w[1]));
                for (x, forward) in [(w[0], true), (w[1], false)] {
                    let key = if x < n {
                        match (upper, forward) {
                            (true, true) => (0, radius),
                            (true, false) => (1, -radius),
                            (false, false) => (2, radius),
                            (false, true) => (3, -radius),
                        }
                    } else {
                        let (num, den, _) = list[if forward { j - 1 } else { j }];
                        let slope = (pa + pb) * den - 2 * num;
                        (u8::from(!forward), if upper { slope } else { -slope })
                    };
                    keyed[x].push((key, e));
                }
            }
            paths.push(p);
        }
        let rot: Vec<Vec<usize>> = keyed
            .into_iter()
            .map(|mut l| {
                l.sort_unstable();
                l.into_iter().map(|(_, e)| e).collect()
            })
            .collect();
        let graph = UGraph::new(nv, edges.clone()).expect("book drawing is simple");
        let rotation =
            RotationSystem::new(nv, edges, rot).expect("rotation covers every half-edge");
        return Drawing {
            original_vertices: n,
            original_edges: arcs.to_vec(),
            graph,
            dummies,
            paths,
            rotation,
            route: DrawingRoute::Book,
        };
    }
}
