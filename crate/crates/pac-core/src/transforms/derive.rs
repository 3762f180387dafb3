//! Reverse-mode derivative circuits.

use alloc::vec;
use alloc::vec::Vec;

use super::{int_bound, planarize, reduce_degree, TransformReport};
use crate::circuit::{Circuit, CircuitError, GateId, GateKind, Var};
use crate::scalar::Scalar;

/// Circuit whose outputs are the partial derivatives of a single-output
/// circuit with respect to each x variable, by transposing the computation
/// (adjoints summed over fan-out). With `preserve_planarity` the input must
/// be read-once and planar; the transposed circuit is then drawn with
/// crossings placed consistently with its evaluation order and each
/// crossing replaced by a gadget. Bounds: `6 s`, or `40 s` when planarity is preserved.
pub fn derivative_circuit(
    c: &Circuit,
    preserve_planarity: bool,
) -> Result<(Circuit, TransformReport), CircuitError> {
    c.check()?;
    if c.outputs.len() != 1 {
        return Err(CircuitError::Precondition(
            "derivatives need a single-output circuit".into(),
        ));
    }
    if c.in_degrees().into_iter().any(|d| d > 2) {
        return Err(CircuitError::Precondition(
            "derivatives need fan-in at most 2".into(),
        ));
    }
    if preserve_planarity && !(c.is_read_once() && c.is_planar()) {
        return Err(CircuitError::Precondition(
            "planar derivatives need a read-once planar circuit".into(),
        ));
    }
    let s = c.size();
    if !preserve_planarity {
        let d = reverse_mode(c);
        let report = TransformReport::new(s, d.size(), int_bound(6 * s as u128));
        return Ok((d, report));
    }
    let d = split_constants(&reverse_mode(c));
    let d = if d.in_degrees().into_iter().any(|k| k > 2) {
        reduce_degree(&d)?.0
    } else {
        d
    };
    let (p, inner) = (0..PLANAR_SEEDS)
        .map(|t| planarize(&d, 0xd1ff + t))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .min_by_key(|(p, _)| p.size())
        .expect("at least one seed");
    let mut report = TransformReport::new(s, p.size(), int_bound(40 * s as u128));
    report.crossings = inner.crossings;
    report.gadgets = inner.gadgets;
    Ok((p, report))
}

const PLANAR_SEEDS: u64 = 4;

/// Gives every use of a constant its own leaf, so parts of the circuit that
/// only share constants are drawn independently.
fn split_constants(c: &Circuit) -> Circuit {
    let mut out = c.clone();
    for w in 0..out.wires.len() {
        let from = out.wires[w].from;
        if let GateKind::Const(s) = &c.gates[from] {
            let g = out.constant(s.clone());
            out.wires[w].from = g;
        }
    }
    out.prune_unreachable()
}

fn reverse_mode(c: &Circuit) -> Circuit {
    let f = &c.field;
    let mut out = Circuit {
        outputs: Vec::new(),
        ..c.clone()
    };
    let adjw = c.adjacency();
    let order = c.topo_order().expect("checked");
    let o = c.outputs[0];
    let mut terms: Vec<Vec<(GateId, Scalar)>> = vec![Vec::new(); c.size()];
    let mut adj: Vec<Option<GateId>> = vec![None; c.size()];
    let one = f.one();
    let seed_gate = out.constant(one.clone());
    terms[o].push((seed_gate, one.clone()));
    for &v in order.iter().rev() {
        let t = core::mem::take(&mut terms[v]);
        let a = match t.as_slice() {
            [] => continue,
            [(g, s)] if s.is_one() => *g,
            _ => out.add_scaled(&t),
        };
        adj[v] = Some(a);
        let ins = &adjw.ins[v];
        match (&c.gates[v], ins.as_slice()) {
            (GateKind::Add, _) | (GateKind::Mul, [_]) => {
                for &w in ins {
                    terms[c.wires[w].from].push((a, c.wires[w].scale.clone()));
                }
            }
            (GateKind::Mul, [w1, w2]) => {
                let (g1, g2) = (c.wires[*w1].from, c.wires[*w2].from);
                let big = f.mul(&c.wires[*w1].scale, &c.wires[*w2].scale);
                if g1 == g2 {
                    let m = out.mul(&[a, g1]);
                    terms[g1].push((m, f.add(&big, &big)));
                } else {
                    let m1 = out.mul(&[a, g2]);
                    terms[g1].push((m1, big.clone()));
                    let m2 = out.mul(&[a, g1]);
                    terms[g2].push((m2, big));
                }
            }
            _ => {}
        }
    }
    let leaves = c.leaves_by_slot();
    let mut zero = None;
    for i in 0..c.vars.x.len() {
        let slot = c.vars.slot(Var::x(i));
        let parts: Vec<(GateId, Scalar)> = leaves[slot]
            .iter()
            .filter_map(|&l| adj[l])
            .map(|g| (g, one.clone()))
            .collect();
        let g = match parts.as_slice() {
            [] => *zero.get_or_insert_with(|| out.constant(f.zero())),
            [(g, _)] => *g,
            _ => out.add_scaled(&parts),
        };
        out.output(g);
    }
    out.prune_unreachable()
}
