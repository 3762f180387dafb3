//! Planarization by crossover gadgets at the crossings of a drawing.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{emit_gadget, int_bound, TransformReport};
use crate::circuit::{Circuit, CircuitError, GateId};
use crate::planar::planarize_dag;
use crate::util::binom;

/// Draws the circuit with crossings placed consistently with a topological
/// order and replaces every crossing by a crossover gadget. Requires fan-in
/// at most two; the size bound is `s + 3 * C(2s, 2)`.
pub fn planarize(c: &Circuit, seed: u64) -> Result<(Circuit, TransformReport), CircuitError> {
    c.check()?;
    if c.in_degrees().into_iter().any(|d| d > 2) {
        return Err(CircuitError::Precondition(
            "planarize needs fan-in at most 2; run reduce_degree".into(),
        ));
    }
    let s = c.size();
    let bound = int_bound(s as u128 + 3 * binom(2 * s as u64, 2));
    let mut arc_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut arcs = Vec::new();
    let mut wires_of: Vec<Vec<usize>> = Vec::new();
    for (i, w) in c.wires.iter().enumerate() {
        let id = *arc_of.entry((w.from, w.to)).or_insert_with(|| {
            arcs.push((w.from, w.to));
            wires_of.push(Vec::new());
            arcs.len() - 1
        });
        wires_of[id].push(i);
    }
    let d = planarize_dag(s, &arcs, &vec![false; arcs.len()], seed);
    if d.crossings() == 0 {
        return Ok((c.clone(), TransformReport::new(s, s, bound)));
    }
    let mut out = Circuit {
        wires: Vec::new(),
        ..c.clone()
    };
    let nv = d.graph.n();
    // topological order of drawing vertices along paths
    let mut indeg = vec![0usize; nv];
    let mut next = vec![Vec::new(); nv];
    for p in &d.paths {
        for w in p.windows(2) {
            next[w[0]].push(w[1]);
            indeg[w[1]] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..nv).filter(|&x| indeg[x] == 0).collect();
    let mut order = Vec::with_capacity(nv);
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in &next[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                stack.push(y);
            }
        }
    }
    assert_eq!(order.len(), nv, "drawing is acyclic");
    let pos_on: Vec<BTreeMap<usize, usize>> = d
        .paths
        .iter()
        .map(|p| p.iter().enumerate().map(|(i, &x)| (x, i)).collect())
        .collect();
    let mut emitted: BTreeMap<(usize, usize), GateId> = BTreeMap::new();
    let signal = |arc: usize, x: usize, emitted: &BTreeMap<(usize, usize), GateId>| -> GateId {
        if x < s {
            x
        } else {
            emitted[&(x, arc)]
        }
    };
    for &x in &order {
        if x < s {
            continue;
        }
        let (a_arc, b_arc) = d.dummies[x - s];
        let pa = d.paths[a_arc][pos_on[a_arc][&x] - 1];
        let pb = d.paths[b_arc][pos_on[b_arc][&x] - 1];
        let (a, b) = (signal(a_arc, pa, &emitted), signal(b_arc, pb, &emitted));
        let (a2, b2) = emit_gadget(&mut out, a, b, false);
        emitted.insert((x, a_arc), a2);
        emitted.insert((x, b_arc), b2);
    }
    for (i, p) in d.paths.iter().enumerate() {
        let src = signal(i, p[p.len() - 2], &emitted);
        for &w in &wires_of[i] {
            let wire = &c.wires[w];
            out.wire(src, wire.to, wire.scale.clone());
        }
    }
    let mut report = TransformReport::new(s, out.size(), bound);
    report.crossings = d.crossings();
    report.gadgets = d.crossings();
    Ok((out, report))
}
