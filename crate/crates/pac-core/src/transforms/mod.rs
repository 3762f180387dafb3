//! Circuit-to-circuit constructions: degree reduction, crossover
//! planarization, bilinearization, ABP conversion, substitution and
//! reverse-mode derivatives.

mod abp;
mod bilinear;
mod degree;
mod derive;
mod local;
mod planarize;
mod subst;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::circuit::{Circuit, GateId, GateKind};
use crate::planar::{embed, is_planar, UGraph};

pub use abp::abp_to_circuit;
pub use bilinear::bilinearize;
pub use degree::reduce_degree;
pub use derive::derivative_circuit;
pub use planarize::planarize;
pub use subst::substitute;

/// Size accounting for one transform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformReport {
    /// Gates in the input (for ABPs: vertices plus edges).
    pub input_size: usize,
    /// Gates in the output.
    pub output_size: usize,
    /// Crossings removed by gadgets.
    pub crossings: usize,
    /// Crossover gadgets inserted.
    pub gadgets: usize,
    /// Upper bound on the output size that the construction guarantees.
    pub bound: BigRational,
}

impl TransformReport {
    pub(crate) fn new(input_size: usize, output_size: usize, bound: BigRational) -> Self {
        TransformReport {
            input_size,
            output_size,
            crossings: 0,
            gadgets: 0,
            bound,
        }
    }

    /// Output size over input size.
    pub fn blowup(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.output_size),
            BigInt::from(self.input_size.max(1)),
        )
    }

    /// Whether the output size is within [`TransformReport::bound`].
    pub fn satisfied(&self) -> bool {
        BigRational::from_integer(BigInt::from(self.output_size)) <= self.bound
    }
}

pub(crate) fn int_bound(v: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Undirected simple graph of a circuit plus, per wire, its edge id.
pub fn circuit_graph(c: &Circuit) -> (UGraph, Vec<usize>) {
    let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut edges = Vec::new();
    let mut of_wire = Vec::with_capacity(c.wires.len());
    for w in &c.wires {
        let key = (w.from.min(w.to), w.from.max(w.to));
        let id = *ids.entry(key).or_insert_with(|| {
            edges.push(key);
            edges.len() - 1
        });
        of_wire.push(id);
    }
    let g = UGraph::new(c.size(), edges).expect("validated circuits have no self-loops");
    (g, of_wire)
}

impl Circuit {
    /// Whether the underlying undirected graph is planar.
    pub fn is_planar(&self) -> bool {
        is_planar(&circuit_graph(self).0)
    }
}

/// One end of a wire at a gate, in the gate's rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Stub {
    pub wire: usize,
    pub inbound: bool,
}

/// Cyclic stub order at every gate. Follows a planar embedding when one
/// exists (parallel wires reversed at the head so bundles stay uncrossed),
/// otherwise lists in-wires before out-wires.
pub(crate) fn stubs(c: &Circuit) -> (Vec<Vec<Stub>>, bool) {
    let (g, of_wire) = circuit_graph(c);
    let mut by_edge = vec![Vec::new(); g.m()];
    for (i, &e) in of_wire.iter().enumerate() {
        by_edge[e].push(i);
    }
    let mut out = vec![Vec::new(); c.size()];
    match embed(&g) {
        Some(rot) => {
            for (v, list) in out.iter_mut().enumerate() {
                for &e in rot.rotation(v) {
                    let ws = &by_edge[e];
                    let head = c.wires[ws[0]].to == v;
                    let mut group: Vec<Stub> = ws
                        .iter()
                        .map(|&w| Stub {
                            wire: w,
                            inbound: head,
                        })
                        .collect();
                    if head {
                        group.reverse();
                    }
                    list.extend(group);
                }
            }
            (out, true)
        }
        None => {
            for (i, w) in c.wires.iter().enumerate() {
                out[w.to].push(Stub {
                    wire: i,
                    inbound: true,
                });
            }
            for (i, w) in c.wires.iter().enumerate() {
                out[w.from].push(Stub {
                    wire: i,
                    inbound: false,
                });
            }
            (out, false)
        }
    }
}

/// Appends a crossover gadget reading `a` and `b`; returns the gates
/// emitting `(a, b)` on the far side. Three add gates: `s = a + b`,
/// `b' = s - a`, `a' = s - b'`. With `isolate` both inputs are first
/// copied so each source is read once (four gates).
pub(crate) fn emit_gadget(
    c: &mut Circuit,
    a: GateId,
    b: GateId,
    isolate: bool,
) -> (GateId, GateId) {
    let one = c.field.one();
    let minus = c.field.neg(&one);
    let a = if isolate { c.add(&[a]) } else { a };
    let s = c.add(&[a, b]);
    let b2 = c.add_scaled(&[(s, one.clone()), (a, minus.clone())]);
    let a2 = c.add_scaled(&[(s, one), (b2, minus)]);
    (a2, b2)
}

/// The crossover gadget as a standalone circuit: inputs `x1 = a`, `x2 = b`,
/// outputs `(b, a)`.
pub fn crossover_gadget(field: crate::scalar::Field) -> Circuit {
    let mut c = Circuit::new(field, 2, 0, 0);
    let a = c.input(crate::circuit::Var::x(0));
    let b = c.input(crate::circuit::Var::x(1));
    let (a2, b2) = emit_gadget(&mut c, a, b, false);
    c.output(b2);
    c.output(a2);
    c
}

pub(crate) fn is_op(k: &GateKind) -> bool {
    matches!(k, GateKind::Add | GateKind::Mul)
}
