use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{Circuit, CircuitError, GateKind};
use crate::scalar::{Field, Scalar};

/// Degree-at-most-one part of a gate's polynomial: constant plus sparse
/// linear coefficients keyed by flat variable slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineForm {
    /// Constant term.
    pub constant: Scalar,
    /// Nonzero linear coefficients.
    pub linear: BTreeMap<usize, Scalar>,
}

impl AffineForm {
    fn scaled(&self, f: &Field, s: &Scalar) -> AffineForm {
        if s.is_one() {
            return self.clone();
        }
        AffineForm {
            constant: f.mul(&self.constant, s),
            linear: self
                .linear
                .iter()
                .filter_map(|(k, v)| {
                    let p = f.mul(v, s);
                    (!p.is_zero()).then_some((*k, p))
                })
                .collect(),
        }
    }

    fn accumulate(&mut self, f: &Field, other: &AffineForm, factor: &Scalar) {
        if factor.is_zero() {
            return;
        }
        for (k, v) in &other.linear {
            let add = f.mul(v, factor);
            let e = self.linear.entry(*k).or_insert_with(|| f.zero());
            *e = f.add(e, &add);
            if e.is_zero() {
                self.linear.remove(k);
            }
        }
    }
}

/// Exact degree-at-most-one parts of every gate.
pub fn affine_parts(c: &Circuit) -> Result<Vec<AffineForm>, CircuitError> {
    c.check()?;
    let f = &c.field;
    let order = c.topo_order().expect("validated");
    let adj = c.adjacency();
    let zero = AffineForm {
        constant: f.zero(),
        linear: BTreeMap::new(),
    };
    let mut parts = vec![zero.clone(); c.size()];
    for &g in &order {
        let children: Vec<AffineForm> = adj.ins[g]
            .iter()
            .map(|&w| parts[c.wires[w].from].scaled(f, &c.wires[w].scale))
            .collect();
        parts[g] = match &c.gates[g] {
            GateKind::Input(v) => {
                let mut linear = BTreeMap::new();
                linear.insert(c.vars.slot(*v), f.one());
                AffineForm {
                    constant: f.zero(),
                    linear,
                }
            }
            GateKind::Const(s) => AffineForm {
                constant: s.clone(),
                linear: BTreeMap::new(),
            },
            GateKind::Add => {
                let mut acc = zero.clone();
                for ch in &children {
                    acc.constant = f.add(&acc.constant, &ch.constant);
                    acc.accumulate(f, ch, &f.one());
                }
                acc
            }
            GateKind::Mul => {
                let k = children.len();
                let mut prefix = vec![f.one(); k + 1];
                for i in 0..k {
                    prefix[i + 1] = f.mul(&prefix[i], &children[i].constant);
                }
                let mut suffix = f.one();
                let mut acc = AffineForm {
                    constant: prefix[k].clone(),
                    linear: BTreeMap::new(),
                };
                for i in (0..k).rev() {
                    let others = f.mul(&prefix[i], &suffix);
                    acc.accumulate(f, &children[i], &others);
                    suffix = f.mul(&suffix, &children[i].constant);
                }
                acc
            }
        };
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Var;
    use std::prelude::v1::*;

    #[test]
    fn product_of_affine_children() {
        let f = Field::Rationals;
        let mut c = Circuit::new(f.clone(), 2, 0, 0);
        let (x1, x2) = (c.input(Var::x(0)), c.input(Var::x(1)));
        let k2 = c.constant(f.from_i64(2));
        let k3 = c.constant(f.from_i64(3));
        let a = c.add(&[x1, k2]);
        let b = c.add_scaled(&[(x2, f.from_i64(5)), (k3, f.one())]);
        let m = c.mul(&[a, b]);
        c.output(m);
        // (x1 + 2)(5 x2 + 3) = 6 + 3 x1 + 10 x2 + 5 x1 x2
        let p = &affine_parts(&c).unwrap()[m];
        assert_eq!(p.constant, f.from_i64(6));
        assert_eq!(p.linear.get(&0), Some(&f.from_i64(3)));
        assert_eq!(p.linear.get(&1), Some(&f.from_i64(10)));
    }
}
