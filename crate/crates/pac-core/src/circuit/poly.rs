use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{Circuit, CircuitError, GateKind};
use crate::scalar::{Field, Scalar};

/// Sorted `(slot, exponent)` pairs.
pub type Monomial = Vec<(usize, u32)>;

/// Sparse polynomial over flat variable slots.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    /// Nonzero coefficients.
    pub terms: BTreeMap<Monomial, Scalar>,
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

impl Poly {
    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&(_, e)| e).sum())
            .max()
    }

    fn add_term(&mut self, f: &Field, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(|| f.zero());
        *e = f.add(e, &c);
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn scaled(&self, f: &Field, s: &Scalar) -> Poly {
        let mut p = Poly::default();
        for (m, c) in &self.terms {
            p.add_term(f, m.clone(), f.mul(c, s));
        }
        p
    }

    fn times(&self, f: &Field, o: &Poly, cap: usize) -> Result<Poly, CircuitError> {
        let mut p = Poly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                p.add_term(f, mono_mul(ma, mb), f.mul(ca, cb));
                if p.terms.len() > cap {
                    return Err(CircuitError::TooLarge(cap));
                }
            }
        }
        Ok(p)
    }
}

impl Circuit {
    /// Expands every output into a sparse polynomial, failing once any
    /// intermediate exceeds `cap` monomials (at most 2^16 is sensible).
    pub fn expand(&self, cap: usize) -> Result<Vec<Poly>, CircuitError> {
        self.check()?;
        let f = &self.field;
        let order = self.topo_order().expect("validated");
        let adj = self.adjacency();
        let mut val: Vec<Option<Poly>> = vec![None; self.size()];
        for &g in &order {
            let p = match &self.gates[g] {
                GateKind::Input(v) => {
                    let mut p = Poly::default();
                    p.add_term(f, vec![(self.vars.slot(*v), 1)], f.one());
                    p
                }
                GateKind::Const(s) => {
                    let mut p = Poly::default();
                    p.add_term(f, Vec::new(), s.clone());
                    p
                }
                GateKind::Add => {
                    let mut acc = Poly::default();
                    for &w in &adj.ins[g] {
                        let wire = &self.wires[w];
                        for (m, c) in &val[wire.from].as_ref().expect("topo").terms {
                            acc.add_term(f, m.clone(), f.mul(c, &wire.scale));
                        }
                        if acc.terms.len() > cap {
                            return Err(CircuitError::TooLarge(cap));
                        }
                    }
                    acc
                }
                GateKind::Mul => {
                    let mut acc = Poly::default();
                    acc.add_term(f, Vec::new(), f.one());
                    for &w in &adj.ins[g] {
                        let wire = &self.wires[w];
                        let child = val[wire.from]
                            .as_ref()
                            .expect("topo")
                            .scaled(f, &wire.scale);
                        acc = acc.times(f, &child, cap)?;
                    }
                    acc
                }
            };
            val[g] = Some(p);
        }
        Ok(self
            .outputs
            .iter()
            .map(|&o| val[o].clone().expect("evaluated"))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Var;
    use std::prelude::v1::*;

    #[test]
    fn square_of_sum() {
        let f = Field::Rationals;
        let mut c = Circuit::new(f.clone(), 2, 0, 0);
        let (a, b) = (c.input(Var::x(0)), c.input(Var::x(1)));
        let s = c.add(&[a, b]);
        let m = c.mul(&[s, s]);
        c.output(m);
        let p = &c.expand(1 << 16).unwrap()[0];
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.terms.get(&vec![(0, 1), (1, 1)]), Some(&f.from_i64(2)));
        assert_eq!(p.terms.len(), 3);
        assert!(matches!(c.expand(2), Err(CircuitError::TooLarge(2))));
    }
}
