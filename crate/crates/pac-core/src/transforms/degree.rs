//! Fan-in/fan-out reduction with balanced trees placed in rotation order.

use alloc::vec;
use alloc::vec::Vec;

use super::local::{assemble, Local, Node, Port};
use super::{int_bound, is_op, stubs, Stub, TransformReport};
use crate::circuit::{Circuit, CircuitError, GateKind};

/// Replaces every gate of fan-in or fan-out above two by balanced binary
/// trees whose leaves follow the gate's rotation, so planar inputs stay
/// planar. Where a gate's in- and out-wires alternate in three or more
/// blocks no tree fits; the value is then recomputed once per out-block and
/// the copies are routed through crossover gadgets inside the gate's disk.
pub fn reduce_degree(c: &Circuit) -> Result<(Circuit, TransformReport), CircuitError> {
    c.check()?;
    let bound = int_bound(7 * c.size() as u128);
    if c.has_degree_at_most_two() {
        let report = TransformReport::new(c.size(), c.size(), bound);
        return Ok((c.clone(), report));
    }
    let (rot, _) = stubs(c);
    let locals: Vec<Local> = (0..c.size()).map(|v| local_for(c, v, &rot[v])).collect();
    let asm = assemble(c, &locals, true, 0x7ee5)?;
    let mut report = TransformReport::new(c.size(), asm.circuit.size(), bound);
    report.crossings = asm.crossings;
    report.gadgets = asm.crossings;
    Ok((asm.circuit, report))
}

/// Blocks of consecutive same-direction stubs, rotated so the first block
/// is inbound when both directions occur.
fn blocks(s: &[Stub]) -> Vec<Vec<usize>> {
    let d = s.len();
    if d == 0 {
        return Vec::new();
    }
    let start = (0..d)
        .find(|&i| s[i].inbound && !s[(i + d - 1) % d].inbound)
        .unwrap_or(0);
    let mut out: Vec<Vec<usize>> = Vec::new();
    for k in 0..d {
        let i = (start + k) % d;
        match out.last_mut() {
            Some(b) if s[b[0]].inbound == s[i].inbound => b.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}

struct Builder<'a> {
    l: Local,
    kind: GateKind,
    c: &'a Circuit,
    ports: &'a [Stub],
}

impl Builder<'_> {
    fn gate(&mut self, k: GateKind) -> usize {
        self.l.gates.push(k);
        self.l.gates.len() - 1
    }

    fn arc(&mut self, a: Node, b: Node, scale: crate::scalar::Scalar) {
        self.l.arcs.push((a, b, scale));
    }

    fn unit(&mut self, a: Node, b: Node) {
        let one = self.c.field.one();
        self.arc(a, b, one);
    }

    /// Feeds the in-stubs `leaves` (a contiguous run) into `parent` through a
    /// balanced tree of the gate's own operation.
    fn in_tree(&mut self, leaves: &[usize], parent: usize) {
        if leaves.len() == 1 {
            let w = self.ports[leaves[0]].wire;
            let scale = self.c.wires[w].scale.clone();
            self.arc(Node::Port(leaves[0]), Node::Gate(parent), scale);
            return;
        }
        let g = self.gate(self.kind.clone());
        let mid = leaves.len() / 2;
        self.in_tree(&leaves[..mid], g);
        self.in_tree(&leaves[mid..], g);
        self.unit(Node::Gate(g), Node::Gate(parent));
    }

    /// Delivers `src` to the out-stubs `leaves` using one out-slot of `src`.
    fn out_slot(&mut self, leaves: &[usize], src: usize) {
        if leaves.len() == 1 {
            self.unit(Node::Gate(src), Node::Port(leaves[0]));
            return;
        }
        let copy = self.gate(GateKind::Add);
        self.unit(Node::Gate(src), Node::Gate(copy));
        let mid = leaves.len() / 2;
        self.out_slot(&leaves[..mid], copy);
        self.out_slot(&leaves[mid..], copy);
    }

    /// Uses both in-slots (or both out-slots) of `root` for up to two runs.
    fn two_runs(&mut self, runs: &[&Vec<usize>], root: usize, inbound: bool) {
        let parts: Vec<&[usize]> = match runs {
            [] => Vec::new(),
            [one] if one.len() <= 2 => one.chunks(1).collect(),
            [one] => {
                let mid = one.len() / 2;
                vec![&one[..mid], &one[mid..]]
            }
            many => many.iter().map(|r| r.as_slice()).collect(),
        };
        for p in parts {
            if inbound {
                self.in_tree(p, root);
            } else {
                self.out_slot(p, root);
            }
        }
    }
}

fn local_for(c: &Circuit, v: usize, s: &[Stub]) -> Local {
    let ports: Vec<Port> = s
        .iter()
        .map(|st| Port {
            wire: st.wire,
            comp: 0,
            inbound: st.inbound,
        })
        .collect();
    let kind = c.gates[v].clone();
    let mut b = Builder {
        l: Local {
            ports,
            ..Local::default()
        },
        kind: kind.clone(),
        c,
        ports: s,
    };
    let bl = blocks(s);
    let ins: Vec<&Vec<usize>> = bl.iter().filter(|x| s[x[0]].inbound).collect();
    let outs: Vec<&Vec<usize>> = bl.iter().filter(|x| !s[x[0]].inbound).collect();
    if ins.len() <= 2 && outs.len() <= 2 {
        let root = b.gate(kind);
        b.l.output = Some(root);
        b.two_runs(&ins, root, true);
        b.two_runs(&outs, root, false);
        return b.l;
    }
    // interleaved: one partial value per in-block, one full value per out-block
    debug_assert!(is_op(&kind));
    b.l.draw = true;
    let k = ins.len();
    let partial: Vec<usize> = ins
        .iter()
        .map(|run| {
            if run.len() == 1 {
                let g = b.gate(GateKind::Add);
                b.in_tree(run, g);
                g
            } else {
                let g = b.gate(kind.clone());
                b.two_runs(&[*run], g, true);
                g
            }
        })
        .collect();
    // copies[m][j]: copy of partial m destined for out-block j
    let mut copies = vec![Vec::with_capacity(k); k];
    for (m, &p) in partial.iter().enumerate() {
        let mut frontier = vec![p];
        while frontier.len() < k {
            let src = frontier.remove(0);
            for _ in 0..2 {
                let g = b.gate(GateKind::Add);
                b.unit(Node::Gate(src), Node::Gate(g));
                frontier.push(g);
            }
        }
        copies[m] = frontier;
    }
    for (j, run) in outs.iter().enumerate() {
        let leaves: Vec<usize> = (0..k).map(|m| copies[m][(j + k - m) % k]).collect();
        let root = combine(&mut b, &leaves, &kind);
        if j == 0 {
            b.l.output = Some(root);
        }
        b.two_runs(&[*run], root, false);
    }
    b.l
}

fn combine(b: &mut Builder<'_>, leaves: &[usize], kind: &GateKind) -> usize {
    if leaves.len() == 1 {
        return leaves[0];
    }
    let mid = leaves.len() / 2;
    let (l, r) = (
        combine(b, &leaves[..mid], kind),
        combine(b, &leaves[mid..], kind),
    );
    let g = b.gate(kind.clone());
    b.unit(Node::Gate(l), Node::Gate(g));
    b.unit(Node::Gate(r), Node::Gate(g));
    g
}
