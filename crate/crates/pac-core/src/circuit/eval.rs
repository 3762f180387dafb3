use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{Circuit, CircuitError, GateKind, Var, VarSet};
use crate::scalar::{Field, Scalar};

/// Values for every declared variable, in flat slot order (x, then y, then z).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    /// One value per slot.
    pub values: Vec<Scalar>,
}

impl Assignment {
    /// Builds from per-namespace vectors.
    pub fn new(x: Vec<Scalar>, y: Vec<Scalar>, z: Vec<Scalar>) -> Self {
        let mut values = x;
        values.extend(y);
        values.extend(z);
        Assignment { values }
    }

    /// Builds from `(name, value)` pairs; must cover exactly the declared variables.
    pub fn from_names(vars: &VarSet, pairs: &[(&str, Scalar)]) -> Result<Self, CircuitError> {
        let mut values: Vec<Option<Scalar>> = vec![None; vars.total()];
        for (name, v) in pairs {
            let var = vars
                .lookup(name)
                .ok_or_else(|| CircuitError::UnknownVariable((*name).into()))?;
            values[vars.slot(var)] = Some(v.clone());
        }
        let mut out = Vec::with_capacity(values.len());
        for (slot, v) in values.into_iter().enumerate() {
            out.push(v.ok_or(CircuitError::MissingVariable(vars.var_at(slot)))?);
        }
        Ok(Assignment { values: out })
    }

    /// Value of `v`.
    pub fn get(&self, vars: &VarSet, v: Var) -> Option<&Scalar> {
        self.values.get(vars.slot(v))
    }

    fn check(&self, vars: &VarSet) -> Result<(), CircuitError> {
        if self.values.len() < vars.total() {
            return Err(CircuitError::MissingVariable(
                vars.var_at(self.values.len()),
            ));
        }
        if self.values.len() > vars.total() {
            return Err(CircuitError::Mismatch("assignment has extra values".into()));
        }
        Ok(())
    }
}

/// Rational value with a machine-word fast path.
#[derive(Clone, Debug)]
enum Q {
    S(i128, i128),
    B(BigRational),
}

impl Q {
    fn from_big(r: &BigRational) -> Q {
        match (r.numer().to_i128(), r.denom().to_i128()) {
            (Some(n), Some(d)) if n.unsigned_abs() < 1 << 100 && d < 1 << 100 => Q::S(n, d),
            _ => Q::B(r.clone()),
        }
    }
    fn big(&self) -> BigRational {
        match self {
            Q::S(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Q::B(r) => r.clone(),
        }
    }
    fn is_zero(&self) -> bool {
        match self {
            Q::S(n, _) => *n == 0,
            Q::B(r) => r.is_zero(),
        }
    }
    fn small(n: i128, d: i128) -> Q {
        let g = n.gcd(&d);
        if g > 1 {
            Q::S(n / g, d / g)
        } else {
            Q::S(n, d)
        }
    }
    fn add(&self, o: &Q) -> Q {
        if let (Q::S(a, b), Q::S(c, d)) = (self, o) {
            if b == d {
                if let Some(n) = a.checked_add(*c) {
                    return Q::small(n, *b);
                }
            } else {
                let g = b.gcd(d);
                let r = (|| {
                    let n = a.checked_mul(d / g)?.checked_add(c.checked_mul(b / g)?)?;
                    let den = (b / g).checked_mul(*d)?;
                    Some(Q::small(n, den))
                })();
                if let Some(r) = r {
                    return r;
                }
            }
        }
        Q::from_big(&(self.big() + o.big()))
    }
    fn mul(&self, o: &Q) -> Q {
        if let (Q::S(a, b), Q::S(c, d)) = (self, o) {
            let g1 = a.gcd(d).max(1);
            let g2 = c.gcd(b).max(1);
            if let (Some(n), Some(den)) =
                ((a / g1).checked_mul(c / g2), (b / g2).checked_mul(d / g1))
            {
                return Q::S(n, den);
            }
        }
        Q::from_big(&(self.big() * o.big()))
    }
}

/// A circuit compiled for evaluation modulo a word-sized prime.
#[derive(Clone, Debug)]
pub struct ModEval {
    q: u64,
    order: Vec<usize>,
    ops: Vec<Op>,
    in_start: Vec<usize>,
    in_from: Vec<usize>,
    in_scale: Vec<u64>,
    outputs: Vec<usize>,
    slots: usize,
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Input(usize),
    Const(u64),
    Add,
    Mul,
}

impl ModEval {
    /// Compiles `c` for arithmetic mod `q` (`q` prime, below 2^63).
    pub fn new(c: &Circuit, q: u64) -> Result<Self, CircuitError> {
        c.check()?;
        let order = c.topo_order().expect("validated");
        let f = &c.field;
        let mut ops = Vec::with_capacity(c.size());
        for k in &c.gates {
            ops.push(match k {
                GateKind::Input(v) => Op::Input(c.vars.slot(*v)),
                GateKind::Const(s) => {
                    Op::Const(f.residue_mod(s, q).ok_or(CircuitError::BadReduction)?)
                }
                GateKind::Add => Op::Add,
                GateKind::Mul => Op::Mul,
            });
        }
        let adj = c.adjacency();
        let mut in_start = Vec::with_capacity(c.size() + 1);
        let mut in_from = Vec::with_capacity(c.wires.len());
        let mut in_scale = Vec::with_capacity(c.wires.len());
        in_start.push(0);
        for g in 0..c.size() {
            for &w in &adj.ins[g] {
                let wire = &c.wires[w];
                in_from.push(wire.from);
                in_scale.push(
                    f.residue_mod(&wire.scale, q)
                        .ok_or(CircuitError::BadReduction)?,
                );
            }
            in_start.push(in_from.len());
        }
        Ok(ModEval {
            q,
            order,
            ops,
            in_start,
            in_from,
            in_scale,
            outputs: c.outputs.clone(),
            slots: c.vars.total(),
        })
    }

    /// The modulus.
    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Number of variable slots expected by `eval`.
    pub fn slots(&self) -> usize {
        self.slots
    }

    /// Values of every gate at `point` (one residue per variable slot).
    pub fn eval_all(&self, point: &[u64]) -> Vec<u64> {
        let q = self.q;
        let mut val = vec![0u64; self.ops.len()];
        for &g in &self.order {
            let ins = self.in_start[g]..self.in_start[g + 1];
            val[g] = match self.ops[g] {
                Op::Input(s) => point[s] % q,
                Op::Const(v) => v,
                Op::Add => {
                    let mut acc = 0u64;
                    for i in ins {
                        let t = mulmod(val[self.in_from[i]], self.in_scale[i], q);
                        acc += t;
                        if acc >= q {
                            acc -= q;
                        }
                    }
                    acc
                }
                Op::Mul => {
                    let mut acc = 1 % q;
                    for i in ins {
                        acc = mulmod(acc, mulmod(val[self.in_from[i]], self.in_scale[i], q), q);
                    }
                    acc
                }
            };
        }
        val
    }

    /// Output values at `point`.
    pub fn eval(&self, point: &[u64]) -> Vec<u64> {
        let val = self.eval_all(point);
        self.outputs.iter().map(|&o| val[o]).collect()
    }
}

#[inline]
fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

impl Circuit {
    /// Exact output values at `a`.
    pub fn evaluate(&self, a: &Assignment) -> Result<Vec<Scalar>, CircuitError> {
        let all = self.evaluate_all(a)?;
        Ok(self.outputs.iter().map(|&o| all[o].clone()).collect())
    }

    /// Exact values of every gate at `a`.
    pub fn evaluate_all(&self, a: &Assignment) -> Result<Vec<Scalar>, CircuitError> {
        self.check()?;
        a.check(&self.vars)?;
        for v in &a.values {
            self.field.check(v)?;
        }
        match &self.field {
            Field::Rationals => Ok(self.eval_rational(a)),
            f => match f.modulus_u64() {
                Some(q) => {
                    let m = ModEval::new(self, q)?;
                    let point: Vec<u64> = a
                        .values
                        .iter()
                        .map(|v| f.residue_mod(v, q).expect("residue"))
                        .collect();
                    Ok(m.eval_all(&point)
                        .into_iter()
                        .map(|v| f.from_u64(v))
                        .collect())
                }
                None => Ok(self.eval_generic(a)),
            },
        }
    }

    fn eval_rational(&self, a: &Assignment) -> Vec<Scalar> {
        let order = self.topo_order().expect("validated");
        let adj = self.adjacency();
        let scales: Vec<Q> = self
            .wires
            .iter()
            .map(|w| match &w.scale {
                Scalar::Rational(r) => Q::from_big(r),
                Scalar::Residue(_) => unreachable!(),
            })
            .collect();
        let as_q = |s: &Scalar| match s {
            Scalar::Rational(r) => Q::from_big(r),
            Scalar::Residue(_) => unreachable!(),
        };
        let mut val: Vec<Q> = vec![Q::S(0, 1); self.size()];
        for &g in &order {
            val[g] = match &self.gates[g] {
                GateKind::Input(v) => as_q(&a.values[self.vars.slot(*v)]),
                GateKind::Const(s) => as_q(s),
                GateKind::Add => {
                    let mut acc = Q::S(0, 1);
                    for &w in &adj.ins[g] {
                        let c = &val[self.wires[w].from];
                        if !c.is_zero() {
                            acc = acc.add(&c.mul(&scales[w]));
                        }
                    }
                    acc
                }
                GateKind::Mul => {
                    let mut acc = Q::S(1, 1);
                    for &w in &adj.ins[g] {
                        let c = &val[self.wires[w].from];
                        if c.is_zero() {
                            acc = Q::S(0, 1);
                            break;
                        }
                        acc = acc.mul(&c.mul(&scales[w]));
                    }
                    acc
                }
            };
        }
        val.into_iter()
            .map(|q| Scalar::Rational(reduce(q.big())))
            .collect()
    }

    fn eval_generic(&self, a: &Assignment) -> Vec<Scalar> {
        let f = &self.field;
        let order = self.topo_order().expect("validated");
        let adj = self.adjacency();
        let mut val = vec![f.zero(); self.size()];
        for &g in &order {
            val[g] = match &self.gates[g] {
                GateKind::Input(v) => a.values[self.vars.slot(*v)].clone(),
                GateKind::Const(s) => s.clone(),
                GateKind::Add => adj.ins[g].iter().fold(f.zero(), |acc, &w| {
                    let wire = &self.wires[w];
                    f.add(&acc, &f.mul(&val[wire.from], &wire.scale))
                }),
                GateKind::Mul => adj.ins[g].iter().fold(f.one(), |acc, &w| {
                    let wire = &self.wires[w];
                    f.mul(&acc, &f.mul(&val[wire.from], &wire.scale))
                }),
            };
        }
        val
    }
}

fn reduce(r: BigRational) -> BigRational {
    if r.denom().is_one() {
        r
    } else {
        BigRational::new(r.numer().clone(), r.denom().clone())
    }
}
