//! ABP to circuit conversion.

use alloc::format;
use alloc::vec;

use super::{int_bound, reduce_degree, TransformReport};
use crate::circuit::{Abp, Circuit, CircuitError, EdgeLabel, GateKind};

/// Every vertex but the source becomes an add gate; an edge out of the
/// source becomes a leaf carrying its label, any other edge becomes a
/// product of its tail gate and a fresh label leaf. Degrees are then reduced
/// in rotation order, so planar programs give planar circuits. Bound:
/// `8 (v + e)`.
pub fn abp_to_circuit(p: &Abp) -> Result<(Circuit, TransformReport), CircuitError> {
    let bad = p.validate();
    if !bad.is_empty() {
        return Err(CircuitError::Precondition(format!(
            "invalid ABP: {:?}",
            bad[0]
        )));
    }
    let input_size = p.vertices + p.edges.len();
    let q = p.pruned()?;
    let mut c = Circuit {
        field: q.field.clone(),
        vars: q.vars.clone(),
        gates: vec![],
        wires: vec![],
        outputs: vec![],
    };
    let mut gate = vec![usize::MAX; q.vertices];
    for v in 0..q.vertices {
        if v != q.source {
            gate[v] = c.add_gate(GateKind::Add);
        }
    }
    for e in &q.edges {
        let leaf = match &e.label {
            EdgeLabel::Var(v) => c.input(*v),
            EdgeLabel::Const(s) => c.constant(s.clone()),
        };
        if e.from == q.source {
            c.wire1(leaf, gate[e.to]);
        } else {
            let m = c.mul(&[gate[e.from], leaf]);
            c.wire1(m, gate[e.to]);
        }
    }
    let sink_fed = q.edges.iter().any(|e| e.to == q.sink);
    if sink_fed {
        c.output(gate[q.sink]);
    } else {
        let z = c.field.zero();
        c.gates.clear();
        c.wires.clear();
        let g = c.constant(z);
        c.output(g);
    }
    let (out, inner) = reduce_degree(&c)?;
    let mut report =
        TransformReport::new(input_size, out.size(), int_bound(8 * input_size as u128));
    report.crossings = inner.crossings;
    report.gadgets = inner.gadgets;
    Ok((out, report))
}
