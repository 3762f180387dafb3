//! Gate-by-gate rewriting inside disjoint disks around the gates of a
//! planar circuit. Each disk has boundary ports in rotation order, one per
//! (wire, component) strand; strands between two disks run as parallel
//! bundles, so all crossings stay inside disks where gadgets remove them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::emit_gadget;
use crate::circuit::{Circuit, CircuitError, GateId, GateKind};
use crate::planar::planarize_disk;
use crate::scalar::Scalar;

/// Endpoint of a local arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Node {
    Port(usize),
    Gate(usize),
}

/// Boundary strand: `comp` distinguishes parallel strands of one wire.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Port {
    pub wire: usize,
    pub comp: usize,
    pub inbound: bool,
}

/// The replacement for one gate.
#[derive(Clone, Debug, Default)]
pub(crate) struct Local {
    pub gates: Vec<GateKind>,
    pub ports: Vec<Port>,
    pub arcs: Vec<(Node, Node, Scalar)>,
    /// Route arcs with crossings; otherwise arcs are planar as listed.
    pub draw: bool,
    /// Local gate carrying the value that replaces the original gate.
    pub output: Option<usize>,
}

pub(crate) struct Assembly {
    pub circuit: Circuit,
    pub crossings: usize,
}

const DISK_ATTEMPTS: u64 = 64;

/// Builds the rewritten circuit. `isolate` selects the four-gate gadget that
/// reads each input once.
pub(crate) fn assemble(
    c: &Circuit,
    locals: &[Local],
    isolate: bool,
    seed: u64,
) -> Result<Assembly, CircuitError> {
    let order = c
        .topo_order()
        .map_err(|_| CircuitError::Precondition("cyclic circuit".into()))?;
    let mut out = Circuit {
        field: c.field.clone(),
        vars: c.vars.clone(),
        gates: Vec::new(),
        wires: Vec::new(),
        outputs: Vec::new(),
    };
    let mut strand: BTreeMap<(usize, usize), GateId> = BTreeMap::new();
    let mut rep = vec![None; c.size()];
    let mut crossings = 0;
    for &v in &order {
        let l = &locals[v];
        let gid: Vec<GateId> = l.gates.iter().map(|k| out.add_gate(k.clone())).collect();
        let inbound: Vec<Option<GateId>> = l
            .ports
            .iter()
            .map(|p| {
                if p.inbound {
                    strand.get(&(p.wire, p.comp)).copied()
                } else {
                    None
                }
            })
            .collect();
        rep[v] = l.output.map(|j| gid[j]);
        let np = l.ports.len();
        let index = |n: Node| match n {
            Node::Port(p) => p,
            Node::Gate(g) => np + g,
        };
        let arcs: Vec<(usize, usize)> = l
            .arcs
            .iter()
            .map(|&(a, b, _)| (index(a), index(b)))
            .collect();
        let nloc = np + l.gates.len();
        let (paths, dummies) = if l.draw && !arcs.is_empty() {
            let ports: Vec<usize> = (0..np).collect();
            let d = (0..DISK_ATTEMPTS)
                .find_map(|t| planarize_disk(nloc, &ports, &arcs, seed ^ (v as u64) << 8 ^ t))
                .ok_or_else(|| {
                    CircuitError::Precondition(format!("no acyclic local drawing at gate {v}"))
                })?;
            (d.paths[..arcs.len()].to_vec(), d.dummies.clone())
        } else {
            (
                arcs.iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>(),
                Vec::new(),
            )
        };
        crossings += dummies.len();
        // dummies sit at nloc + 1 + i (the disk hub is nloc)
        let first_dummy = nloc + 1;
        let signal_of = |x: usize| -> Option<GateId> {
            if x < np {
                inbound[x]
            } else {
                Some(gid[x - np])
            }
        };
        // gadget outputs keyed by (dummy, arc)
        let mut emitted: BTreeMap<(usize, usize), GateId> = BTreeMap::new();
        let pred = |arc: usize, x: usize| -> usize {
            let p = &paths[arc];
            p[p.iter().position(|&y| y == x).expect("dummy on path") - 1]
        };
        let dummy_order = dummy_topo(&paths, nloc, first_dummy, dummies.len());
        for d in dummy_order {
            let (a_arc, b_arc) = dummies[d - first_dummy];
            let sig = |arc: usize,
                       emitted: &BTreeMap<(usize, usize), GateId>|
             -> Result<GateId, CircuitError> {
                let p = pred(arc, d);
                if p >= first_dummy {
                    Ok(emitted[&(p, arc)])
                } else {
                    signal_of(p).ok_or_else(|| {
                        CircuitError::Precondition(format!("unfed strand at gate {v}"))
                    })
                }
            };
            let (a, b) = (sig(a_arc, &emitted)?, sig(b_arc, &emitted)?);
            let (a2, b2) = emit_gadget(&mut out, a, b, isolate);
            emitted.insert((d, a_arc), a2);
            emitted.insert((d, b_arc), b2);
        }
        for (i, p) in paths.iter().enumerate() {
            let last = p[p.len() - 2];
            let src = if last >= first_dummy {
                emitted[&(last, i)]
            } else {
                signal_of(last).ok_or_else(|| {
                    CircuitError::Precondition(format!("unfed strand at gate {v}"))
                })?
            };
            let target = p[p.len() - 1];
            let scale = l.arcs[i].2.clone();
            if target < np {
                let port = l.ports[target];
                debug_assert!(!port.inbound && scale.is_one());
                strand.insert((port.wire, port.comp), src);
            } else {
                out.wire(src, gid[target - np], scale);
            }
        }
    }
    for &o in &c.outputs {
        let g = match rep[o] {
            Some(g) => g,
            None => {
                let z = out.field.zero();
                out.constant(z)
            }
        };
        out.output(g);
    }
    Ok(Assembly {
        circuit: out,
        crossings,
    })
}

/// Dummies in an order where each comes after the dummies preceding it on
/// either of its paths.
fn dummy_topo(paths: &[Vec<usize>], _nloc: usize, first: usize, count: usize) -> Vec<usize> {
    let mut indeg = vec![0usize; count];
    let mut next: Vec<Vec<usize>> = vec![Vec::new(); count];
    for p in paths {
        let ds: Vec<usize> = p.iter().copied().filter(|&x| x >= first).collect();
        for w in ds.windows(2) {
            next[w[0] - first].push(w[1] - first);
            indeg[w[1] - first] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..count).filter(|&d| indeg[d] == 0).collect();
    let mut order = Vec::with_capacity(count);
    while let Some(d) = stack.pop() {
        order.push(d + first);
        for &e in &next[d] {
            indeg[e] -= 1;
            if indeg[e] == 0 {
                stack.push(e);
            }
        }
    }
    assert_eq!(order.len(), count, "local drawing is acyclic");
    order
}
