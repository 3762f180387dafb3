//! Left-right planarity test with embedding construction (iterative).

use alloc::vec;
use alloc::vec::Vec;

use super::{RotationSystem, UGraph};

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Debug)]
struct Interval {
    low: usize,
    high: usize,
}

impl Interval {
    const EMPTY: Interval = Interval {
        low: NONE,
        high: NONE,
    };
    fn empty(&self) -> bool {
        self.low == NONE && self.high == NONE
    }
}

#[derive(Clone, Copy, Debug)]
struct ConflictPair {
    id: usize,
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        core::mem::swap(&mut self.left, &mut self.right);
    }
}

struct Lr<'a> {
    g: &'a UGraph,
    height: Vec<usize>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting: Vec<i64>,
    parent_edge: Vec<usize>,
    oriented: Vec<bool>,
    src: Vec<usize>,
    dst: Vec<usize>,
    out_edges: Vec<Vec<usize>>,
    ordered: Vec<Vec<usize>>,
    refs: Vec<usize>,
    side: Vec<i64>,
    stack: Vec<ConflictPair>,
    next_id: usize,
    stack_bottom: Vec<usize>,
    lowpt_edge: Vec<usize>,
    roots: Vec<usize>,
}

/// Whether `g` is planar.
pub fn is_planar(g: &UGraph) -> bool {
    Lr::new(g).test()
}

/// A planar rotation system of `g`, or `None` if `g` is not planar.
pub fn embed(g: &UGraph) -> Option<RotationSystem> {
    let mut lr = Lr::new(g);
    if !lr.test() {
        return None;
    }
    Some(lr.embedding())
}

impl<'a> Lr<'a> {
    fn new(g: &'a UGraph) -> Self {
        let (n, m) = (g.n(), g.m());
        Lr {
            g,
            height: vec![NONE; n],
            lowpt: vec![0; m],
            lowpt2: vec![0; m],
            nesting: vec![0; m],
            parent_edge: vec![NONE; n],
            oriented: vec![false; m],
            src: vec![NONE; m],
            dst: vec![NONE; m],
            out_edges: vec![Vec::new(); n],
            ordered: Vec::new(),
            refs: vec![NONE; m],
            side: vec![1; m],
            stack: Vec::new(),
            next_id: 0,
            stack_bottom: vec![NONE; m],
            lowpt_edge: vec![NONE; m],
            roots: Vec::new(),
        }
    }

    fn test(&mut self) -> bool {
        let (n, m) = (self.g.n(), self.g.m());
        if n > 2 && m > 3 * n - 6 {
            return false;
        }
        for v in 0..n {
            if self.height[v] == NONE {
                self.height[v] = 0;
                self.roots.push(v);
                self.orient(v);
            }
        }
        self.ordered = self
            .out_edges
            .iter()
            .map(|es| {
                let mut es = es.clone();
                es.sort_by_key(|&e| self.nesting[e]);
                es
            })
            .collect();
        for i in 0..self.roots.len() {
            if !self.testing(self.roots[i]) {
                return false;
            }
        }
        true
    }

    fn half(&self, v: usize, e: usize) -> usize {
        if self.g.edges()[e].0 == v {
            2 * e
        } else {
            2 * e + 1
        }
    }

    fn orient(&mut self, root: usize) {
        let g = self.g;
        let mut ind = vec![0usize; g.n()];
        let mut skip_init = vec![false; 2 * g.m()];
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            let e = self.parent_edge[v];
            let adj = g.neighbors(v);
            while ind[v] < adj.len() {
                let (w, vw) = adj[ind[v]];
                let hv = self.half(v, vw);
                if !skip_init[hv] {
                    if self.oriented[vw] {
                        ind[v] += 1;
                        continue;
                    }
                    self.oriented[vw] = true;
                    self.src[vw] = v;
                    self.dst[vw] = w;
                    self.out_edges[v].push(vw);
                    self.lowpt[vw] = self.height[v];
                    self.lowpt2[vw] = self.height[v];
                    if self.height[w] == NONE {
                        self.parent_edge[w] = vw;
                        self.height[w] = self.height[v] + 1;
                        stack.push(v);
                        stack.push(w);
                        skip_init[hv] = true;
                        break;
                    }
                    self.lowpt[vw] = self.height[w];
                }
                self.nesting[vw] = 2 * self.lowpt[vw] as i64;
                if self.lowpt2[vw] < self.height[v] {
                    self.nesting[vw] += 1;
                }
                if e != NONE {
                    if self.lowpt[vw] < self.lowpt[e] {
                        self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[vw]);
                        self.lowpt[e] = self.lowpt[vw];
                    } else if self.lowpt[vw] > self.lowpt[e] {
                        self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[vw]);
                    } else {
                        self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[vw]);
                    }
                }
                ind[v] += 1;
            }
        }
    }

    fn top_id(&self) -> usize {
        self.stack.last().map_or(NONE, |p| p.id)
    }

    fn conflicting(&self, i: &Interval, b: usize) -> bool {
        !i.empty() && self.lowpt[i.high] > self.lowpt[b]
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        if p.left.empty() {
            return if p.right.low == NONE {
                NONE
            } else {
                self.lowpt[p.right.low]
            };
        }
        if p.right.empty() {
            return if p.left.low == NONE {
                NONE
            } else {
                self.lowpt[p.left.low]
            };
        }
        self.lowpt[p.left.low].min(self.lowpt[p.right.low])
    }

    fn push_pair(&mut self, left: Interval, right: Interval) {
        let id = self.next_id;
        self.next_id += 1;
        self.stack.push(ConflictPair { id, left, right });
    }

    fn testing(&mut self, root: usize) -> bool {
        let n = self.g.n();
        let mut ind = vec![0usize; n];
        let mut skip_init = vec![false; self.g.m()];
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            let e = self.parent_edge[v];
            let mut skip_final = false;
            while ind[v] < self.ordered[v].len() {
                let ei = self.ordered[v][ind[v]];
                let w = self.dst[ei];
                if !skip_init[ei] {
                    self.stack_bottom[ei] = self.top_id();
                    if ei == self.parent_edge[w] {
                        stack.push(v);
                        stack.push(w);
                        skip_init[ei] = true;
                        skip_final = true;
                        break;
                    }
                    self.lowpt_edge[ei] = ei;
                    self.push_pair(Interval::EMPTY, Interval { low: ei, high: ei });
                }
                if self.lowpt[ei] < self.height[v] {
                    if ei == self.ordered[v][0] {
                        self.lowpt_edge[e] = self.lowpt_edge[ei];
                    } else if !self.add_constraints(ei, e) {
                        return false;
                    }
                }
                ind[v] += 1;
            }
            if !skip_final && e != NONE {
                self.remove_back_edges(e);
            }
        }
        true
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p = ConflictPair {
            id: NONE,
            left: Interval::EMPTY,
            right: Interval::EMPTY,
        };
        loop {
            let Some(mut q) = self.stack.pop() else {
                return false;
            };
            if !q.left.empty() {
                q.swap();
            }
            if !q.left.empty() {
                return false;
            }
            if q.right.low != NONE && self.lowpt[q.right.low] > self.lowpt[e] {
                if p.right.empty() {
                    p.right = q.right;
                } else if p.right.low != NONE {
                    self.refs[p.right.low] = q.right.high;
                }
                p.right.low = q.right.low;
            } else if q.right.low != NONE {
                self.refs[q.right.low] = self.lowpt_edge[e];
            }
            if self.top_id() == self.stack_bottom[ei] {
                break;
            }
        }
        while let Some(top) = self.stack.last() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().expect("nonempty");
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if p.right.low != NONE {
                self.refs[p.right.low] = q.right.high;
            }
            if q.right.low != NONE {
                p.right.low = q.right.low;
            }
            if p.left.empty() {
                p.left = q.left;
            } else if p.left.low != NONE {
                self.refs[p.left.low] = q.left.high;
            }
            p.left.low = q.left.low;
        }
        if !(p.left.empty() && p.right.empty()) {
            self.push_pair(p.left, p.right);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.src[e];
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != self.height[u] {
                break;
            }
            let p = self.stack.pop().expect("nonempty");
            if p.left.low != NONE {
                self.side[p.left.low] = -1;
            }
        }
        if let Some(mut p) = self.stack.pop() {
            while p.left.high != NONE && self.dst[p.left.high] == u {
                p.left.high = self.refs[p.left.high];
            }
            if p.left.high == NONE && p.left.low != NONE {
                self.refs[p.left.low] = p.right.low;
                self.side[p.left.low] = -1;
                p.left.low = NONE;
            }
            while p.right.high != NONE && self.dst[p.right.high] == u {
                p.right.high = self.refs[p.right.high];
            }
            if p.right.high == NONE && p.right.low != NONE {
                self.refs[p.right.low] = p.left.low;
                self.side[p.right.low] = -1;
                p.right.low = NONE;
            }
            self.stack.push(p);
        }
        if self.lowpt[e] < self.height[u] {
            if let Some(top) = self.stack.last() {
                let (hl, hr) = (top.left.high, top.right.high);
                self.refs[e] = if hl != NONE && (hr == NONE || self.lowpt[hl] > self.lowpt[hr]) {
                    hl
                } else {
                    hr
                };
            }
        }
    }

    fn sign(&mut self, e: usize) -> i64 {
        let mut chain = vec![e];
        while let Some(&last) = chain.last() {
            let r = self.refs[last];
            if r == NONE {
                break;
            }
            chain.push(r);
        }
        for i in (0..chain.len() - 1).rev() {
            let (a, b) = (chain[i], chain[i + 1]);
            self.side[a] *= self.side[b];
            self.refs[a] = NONE;
        }
        self.side[e]
    }

    fn embedding(&mut self) -> RotationSystem {
        let (n, m) = (self.g.n(), self.g.m());
        for e in 0..m {
            let s = self.sign(e);
            self.nesting[e] *= s;
        }
        let mut cw = vec![NONE; 2 * m];
        let mut ccw = vec![NONE; 2 * m];
        let mut first = vec![NONE; n];
        fn add_cw(
            cw: &mut [usize],
            ccw: &mut [usize],
            first: &mut [usize],
            v: usize,
            h: usize,
            r: usize,
        ) {
            if r == NONE {
                cw[h] = h;
                ccw[h] = h;
                first[v] = h;
                return;
            }
            let c = cw[r];
            cw[r] = h;
            cw[h] = c;
            ccw[c] = h;
            ccw[h] = r;
        }
        fn add_ccw(
            cw: &mut [usize],
            ccw: &mut [usize],
            first: &mut [usize],
            v: usize,
            h: usize,
            r: usize,
        ) {
            if r == NONE {
                add_cw(cw, ccw, first, v, h, NONE);
                return;
            }
            let c = ccw[r];
            add_cw(cw, ccw, first, v, h, c);
            if r == first[v] {
                first[v] = h;
            }
        }
        for v in 0..n {
            let mut es = self.out_edges[v].clone();
            es.sort_by_key(|&e| self.nesting[e]);
            let mut prev = NONE;
            for &e in &es {
                let h = self.half(v, e);
                add_cw(&mut cw, &mut ccw, &mut first, v, h, prev);
                prev = h;
            }
            self.ordered[v] = es;
        }
        let mut left_ref = vec![NONE; n];
        let mut right_ref = vec![NONE; n];
        let mut ind = vec![0usize; n];
        for ri in 0..self.roots.len() {
            let mut stack = vec![self.roots[ri]];
            while let Some(v) = stack.pop() {
                while ind[v] < self.ordered[v].len() {
                    let ei = self.ordered[v][ind[v]];
                    ind[v] += 1;
                    let w = self.dst[ei];
                    let hw = self.half(w, ei);
                    if ei == self.parent_edge[w] {
                        let f = first[w];
                        add_ccw(&mut cw, &mut ccw, &mut first, w, hw, f);
                        let hv = self.half(v, ei);
                        left_ref[v] = hv;
                        right_ref[v] = hv;
                        stack.push(v);
                        stack.push(w);
                        break;
                    } else if self.side[ei] == 1 {
                        add_cw(&mut cw, &mut ccw, &mut first, w, hw, right_ref[w]);
                    } else {
                        add_ccw(&mut cw, &mut ccw, &mut first, w, hw, left_ref[w]);
                        left_ref[w] = hw;
                    }
                }
            }
        }
        let mut rot = vec![Vec::new(); n];
        for v in 0..n {
            let start = first[v];
            if start == NONE {
                continue;
            }
            let mut h = start;
            loop {
                rot[v].push(h / 2);
                h = cw[h];
                if h == start {
                    break;
                }
            }
        }
        RotationSystem::new(n, self.g.edges().to_vec(), rot).expect("LR embedding is consistent")
    }
}
