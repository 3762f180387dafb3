use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use super::pit::DEFAULT_PRIME;
use super::{Circuit, CircuitError, GateKind, ModEval, VarKind};
use crate::util::{rng, Dsu};

/// Size and shape statistics of a circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitMetrics {
    /// Gate count.
    pub size: usize,
    /// Wire count.
    pub wires: usize,
    /// Longest leaf-to-output path, in wires.
    pub depth: usize,
    /// Largest in-degree.
    pub max_fan_in: usize,
    /// Largest out-degree.
    pub max_fan_out: usize,
    /// Number of input gates per variable, by flat slot.
    pub reads: Vec<usize>,
}

impl Circuit {
    /// Computes [`CircuitMetrics`]; the circuit must be valid.
    pub fn metrics(&self) -> Result<CircuitMetrics, CircuitError> {
        self.check()?;
        let order = self.topo_order().expect("validated");
        let adj = self.adjacency();
        let mut d = vec![0usize; self.size()];
        for &g in &order {
            for &w in &adj.ins[g] {
                d[g] = d[g].max(d[self.wires[w].from] + 1);
            }
        }
        Ok(CircuitMetrics {
            size: self.size(),
            wires: self.wires.len(),
            depth: self.outputs.iter().map(|&o| d[o]).max().unwrap_or(0),
            max_fan_in: self.in_degrees().into_iter().max().unwrap_or(0),
            max_fan_out: self.out_degrees().into_iter().max().unwrap_or(0),
            reads: self.leaves_by_slot().iter().map(Vec::len).collect(),
        })
    }

    /// Whether the undirected gate graph is a forest (parallel wires count as cycles).
    pub fn is_formula(&self) -> bool {
        let mut dsu = Dsu::new(self.size());
        self.wires.iter().all(|w| dsu.union(w.from, w.to))
    }

    /// Whether every variable labels at most one input gate.
    pub fn is_read_once(&self) -> bool {
        self.leaves_by_slot().iter().all(|l| l.len() <= 1)
    }

    /// Whether every fan-in and fan-out is at most 2.
    pub fn has_degree_at_most_two(&self) -> bool {
        self.in_degrees()
            .into_iter()
            .chain(self.out_degrees())
            .all(|d| d <= 2)
    }

    /// Per gate: does it compute a linear form (no constant term) in the
    /// variables of `kind` only. Randomized over GF(2^61 - 1) with two rounds of
    /// the test `g(l*P + Q', R) = l*g(P, S) + g(Q', T)`, where only the
    /// `kind` coordinates are combined and the others are drawn afresh.
    pub fn linear_in_only(&self, kind: VarKind, seed: u64) -> Result<Vec<bool>, CircuitError> {
        let q = DEFAULT_PRIME;
        let me = ModEval::new(self, q)?;
        let slots = self.vars.total();
        let of_kind: Vec<bool> = (0..slots)
            .map(|s| self.vars.var_at(s).kind == kind)
            .collect();
        let mut g = rng(seed);
        let mut ok = vec![true; self.size()];
        for _ in 0..2 {
            let mut draw = || -> Vec<u64> { (0..slots).map(|_| g.gen_range(0..q)).collect() };
            let (p1, p2, mut p3) = (draw(), draw(), draw());
            let lambda = g.gen_range(1..q);
            for s in 0..slots {
                if of_kind[s] {
                    p3[s] = ((lambda as u128 * p1[s] as u128 + p2[s] as u128) % q as u128) as u64;
                }
            }
            let (v1, v2, v3) = (me.eval_all(&p1), me.eval_all(&p2), me.eval_all(&p3));
            for gate in 0..self.size() {
                let rhs =
                    ((lambda as u128 * v1[gate] as u128 + v2[gate] as u128) % q as u128) as u64;
                if v3[gate] != rhs {
                    ok[gate] = false;
                }
            }
        }
        Ok(ok)
    }

    /// Whether every mul gate has exactly two distinct children, one an
    /// x-only linear form and the other a y-only linear form.
    pub fn is_bilinear_shape(&self) -> Result<bool, CircuitError> {
        let lx = self.linear_in_only(VarKind::X, 0x51)?;
        let ly = self.linear_in_only(VarKind::Y, 0x52)?;
        let adj = self.adjacency();
        for (g, k) in self.gates.iter().enumerate() {
            if *k != GateKind::Mul {
                continue;
            }
            let ins = &adj.ins[g];
            if ins.len() != 2 {
                return Ok(false);
            }
            let (a, b) = (self.wires[ins[0]].from, self.wires[ins[1]].from);
            if a == b || !((lx[a] && ly[b]) || (ly[a] && lx[b])) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Var;
    use crate::scalar::Field;
    use std::prelude::v1::*;

    #[test]
    fn add_tree_is_formula() {
        let mut c = Circuit::new(Field::Rationals, 8, 0, 0);
        let mut layer: Vec<_> = (0..8).map(|i| c.input(Var::x(i))).collect();
        while layer.len() > 1 {
            layer = layer.chunks(2).map(|p| c.add(p)).collect();
        }
        c.output(layer[0]);
        assert!(c.is_formula() && c.is_read_once());
        let m = c.metrics().unwrap();
        assert_eq!(
            (m.size, m.wires, m.depth, m.max_fan_in, m.max_fan_out),
            (15, 14, 3, 2, 1)
        );
    }

    #[test]
    fn shared_subexpression_is_not_formula() {
        let mut c = Circuit::new(Field::Rationals, 2, 0, 0);
        let (a, b) = (c.input(Var::x(0)), c.input(Var::x(1)));
        let s = c.add(&[a, b]);
        let m = c.mul(&[s, s]);
        c.output(m);
        assert!(!c.is_formula());
    }

    #[test]
    fn bilinear_shape_detection() {
        let f = Field::Rationals;
        let mut c = Circuit::new(f.clone(), 2, 1, 0);
        let (x1, x2, y) = (c.input(Var::x(0)), c.input(Var::x(1)), c.input(Var::y(0)));
        let l = c.add_scaled(&[(x1, f.from_i64(3)), (x2, f.from_i64(-1))]);
        let m = c.mul(&[y, l]);
        c.output(m);
        assert!(c.is_bilinear_shape().unwrap());
        let k = c.constant(f.one());
        let bad = c.add(&[x1, k]);
        let m2 = c.mul(&[bad, y]);
        c.output(m2);
        assert!(!c.is_bilinear_shape().unwrap());
    }
}
