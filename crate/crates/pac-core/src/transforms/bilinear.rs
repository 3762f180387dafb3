//! Bilinearization: per gate, shadow gates for its x-linear, y-linear and
//! bilinear components, rewired inside disks around the original gates.

use alloc::vec;
use alloc::vec::Vec;

use super::local::{assemble, Local, Node, Port};
use super::{int_bound, stubs, TransformReport};
use crate::circuit::{Circuit, CircuitError, GateKind, VarKind};
use crate::scalar::Scalar;

const X: usize = 0;
const Y: usize = 1;
const XY: usize = 2;

/// Rewrites a planar circuit computing a bilinear form into a planar
/// circuit in which every product multiplies an x-linear form by a y-linear
/// form. Each gate gets up to three shadows (x-linear, y-linear and bilinear
/// parts of its polynomial) plus at most two products; the gate's constant
/// term is tracked exactly and folded into wire scales. Shadow strands
/// follow the original wires as parallel bundles and all crossings are
/// confined to the disks around gates. Bound: `3000 s`.
pub fn bilinearize(c: &Circuit) -> Result<(Circuit, TransformReport), CircuitError> {
    c.check()?;
    if c.in_degrees().into_iter().any(|d| d > 2) {
        return Err(CircuitError::Precondition(
            "bilinearize needs fan-in at most 2".into(),
        ));
    }
    if c.outputs.len() != 1 {
        return Err(CircuitError::Precondition(
            "bilinearize needs a single output".into(),
        ));
    }
    if c.gates
        .iter()
        .any(|k| matches!(k, GateKind::Input(v) if v.kind == VarKind::Z))
    {
        return Err(CircuitError::Precondition(
            "bilinearize expects x and y variables only".into(),
        ));
    }
    let (rot, planar) = stubs(c);
    if !planar {
        return Err(CircuitError::Precondition(
            "bilinearize needs a planar circuit".into(),
        ));
    }
    c.extract_bilinear_matrix()?;
    let f = &c.field;
    let order = c.topo_order().expect("checked");
    let adj = c.adjacency();
    let n = c.size();
    let mut has = vec![[false; 3]; n];
    let mut constant = vec![f.zero(); n];
    // per wire and component: scaled uses at the head, as (local gate role, scale)
    let mut uses: Vec<[Vec<(Role, Scalar)>; 3]> = vec![Default::default(); c.wires.len()];
    for &v in &order {
        let ins = &adj.ins[v];
        match &c.gates[v] {
            GateKind::Input(var) => {
                has[v][if var.kind == VarKind::X { X } else { Y }] = true;
            }
            GateKind::Const(s) => constant[v] = s.clone(),
            GateKind::Add => {
                let mut cst = f.zero();
                for &w in ins {
                    let (g, lam) = (c.wires[w].from, &c.wires[w].scale);
                    cst = f.add(&cst, &f.mul(lam, &constant[g]));
                    for k in [X, Y, XY] {
                        if has[g][k] {
                            has[v][k] = true;
                            uses[w][k].push((Role::Shadow(k), lam.clone()));
                        }
                    }
                }
                constant[v] = cst;
            }
            GateKind::Mul if ins.len() == 1 => {
                let w = ins[0];
                let (g, lam) = (c.wires[w].from, &c.wires[w].scale);
                constant[v] = f.mul(lam, &constant[g]);
                for k in [X, Y, XY] {
                    if has[g][k] {
                        has[v][k] = true;
                        uses[w][k].push((Role::Shadow(k), lam.clone()));
                    }
                }
            }
            GateKind::Mul => {
                let (w1, w2) = (ins[0], ins[1]);
                let (g1, g2) = (c.wires[w1].from, c.wires[w2].from);
                let big = f.mul(&c.wires[w1].scale, &c.wires[w2].scale);
                let (c1, c2) = (constant[g1].clone(), constant[g2].clone());
                constant[v] = f.mul(&big, &f.mul(&c1, &c2));
                for k in [X, Y, XY] {
                    for (w, g, other) in [(w1, g1, &c2), (w2, g2, &c1)] {
                        if has[g][k] && !other.is_zero() {
                            has[v][k] = true;
                            uses[w][k].push((Role::Shadow(k), f.mul(&big, other)));
                        }
                    }
                }
                let one = f.one();
                if has[g1][X] && has[g2][Y] {
                    has[v][XY] = true;
                    uses[w1][X].push((Role::Product(0), one.clone()));
                    uses[w2][Y].push((Role::Product(0), one.clone()));
                }
                if has[g2][X] && has[g1][Y] {
                    has[v][XY] = true;
                    uses[w2][X].push((Role::Product(1), one.clone()));
                    uses[w1][Y].push((Role::Product(1), one));
                }
            }
        }
    }
    let bundle = |w: usize| -> Vec<usize> {
        [X, Y, XY]
            .into_iter()
            .filter(|&k| !uses[w][k].is_empty())
            .collect()
    };
    let mut locals = Vec::with_capacity(n);
    for v in 0..n {
        let mut l = Local {
            draw: true,
            ..Local::default()
        };
        let mut role_gate: [Option<usize>; 5] = [None; 5];
        let gate =
            |l: &mut Local, rg: &mut [Option<usize>; 5], r: usize, kind: GateKind| -> usize {
                *rg[r].get_or_insert_with(|| {
                    l.gates.push(kind);
                    l.gates.len() - 1
                })
            };
        match &c.gates[v] {
            GateKind::Input(var) => {
                let k = if var.kind == VarKind::X { X } else { Y };
                gate(&mut l, &mut role_gate, k, GateKind::Input(*var));
            }
            GateKind::Const(_) => {}
            _ => {
                for k in [X, Y, XY] {
                    if has[v][k] {
                        gate(&mut l, &mut role_gate, k, GateKind::Add);
                    }
                }
            }
        }
        let big = match (&c.gates[v], adj.ins[v].as_slice()) {
            (GateKind::Mul, [w1, w2]) => f.mul(&c.wires[*w1].scale, &c.wires[*w2].scale),
            _ => f.one(),
        };
        for st in &rot[v] {
            let w = st.wire;
            let comps = bundle(w);
            if st.inbound {
                for &k in comps.iter().rev() {
                    let p = l.ports.len();
                    l.ports.push(Port {
                        wire: w,
                        comp: k,
                        inbound: true,
                    });
                    for (role, scale) in &uses[w][k] {
                        let target = match role {
                            Role::Shadow(t) => gate(&mut l, &mut role_gate, *t, GateKind::Add),
                            Role::Product(i) => gate(&mut l, &mut role_gate, 3 + i, GateKind::Mul),
                        };
                        l.arcs
                            .push((Node::Port(p), Node::Gate(target), scale.clone()));
                    }
                }
            } else {
                for &k in &comps {
                    let p = l.ports.len();
                    l.ports.push(Port {
                        wire: w,
                        comp: k,
                        inbound: false,
                    });
                    let src = role_gate[k].expect("tail shadow exists");
                    l.arcs.push((Node::Gate(src), Node::Port(p), f.one()));
                }
            }
        }
        for i in 0..2 {
            if let Some(p) = role_gate[3 + i] {
                let xy = gate(&mut l, &mut role_gate, XY, GateKind::Add);
                l.arcs.push((Node::Gate(p), Node::Gate(xy), big.clone()));
            }
        }
        l.output = role_gate[XY];
        locals.push(l);
    }
    let asm = assemble(c, &locals, false, 0xb11e)?;
    let out = asm.circuit.prune_unreachable();
    let mut report = TransformReport::new(n, out.size(), int_bound(3000 * n as u128));
    report.crossings = asm.crossings;
    report.gadgets = asm.crossings;
    Ok((out, report))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Shadow(usize),
    Product(usize),
}
