use alloc::vec;
use alloc::vec::Vec;

use super::pit::{compare_mod, test_modulus, IdentityVerdict, DEFAULT_PRIME};
use super::{Assignment, Circuit, CircuitError, ModEval, Var, VarSet};
use crate::scalar::{Field, Scalar};

/// Edge label of a branching program.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EdgeLabel {
    /// A variable.
    Var(Var),
    /// A field constant.
    Const(Scalar),
}

/// A labeled edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbpEdge {
    /// Tail vertex.
    pub from: usize,
    /// Head vertex.
    pub to: usize,
    /// Weight.
    pub label: EdgeLabel,
}

/// Algebraic branching program: the sum over source-to-sink paths of the
/// product of edge labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Abp {
    /// Scalar field.
    pub field: Field,
    /// Declared variables.
    pub vars: VarSet,
    /// Vertex count; vertices are `0..vertices`.
    pub vertices: usize,
    /// Source vertex.
    pub source: usize,
    /// Sink vertex.
    pub sink: usize,
    /// Edges.
    pub edges: Vec<AbpEdge>,
}

/// A structural problem in a branching program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AbpViolation {
    /// Source or sink out of range, or equal.
    BadTerminals,
    /// Edge endpoint out of range.
    DanglingEdge(usize),
    /// A directed cycle exists.
    Cycle,
    /// The source has incoming edges.
    SourceHasInEdges,
    /// The sink has outgoing edges.
    SinkHasOutEdges,
    /// An edge names an undeclared variable or a foreign scalar.
    BadLabel(usize),
}

impl Abp {
    /// Empty program on `vertices` vertices.
    pub fn new(field: Field, vars: VarSet, vertices: usize, source: usize, sink: usize) -> Self {
        Abp {
            field,
            vars,
            vertices,
            source,
            sink,
            edges: Vec::new(),
        }
    }

    /// Appends an edge.
    pub fn edge(&mut self, from: usize, to: usize, label: EdgeLabel) {
        self.edges.push(AbpEdge { from, to, label });
    }

    /// Kahn order over all vertices, if acyclic.
    pub fn topo_order(&self) -> Option<Vec<usize>> {
        let mut indeg = vec![0usize; self.vertices];
        let mut outs = vec![Vec::new(); self.vertices];
        for (i, e) in self.edges.iter().enumerate() {
            indeg[e.to] += 1;
            outs[e.from].push(i);
        }
        let mut order: Vec<usize> = (0..self.vertices).filter(|&v| indeg[v] == 0).collect();
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &i in &outs[v] {
                let t = self.edges[i].to;
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    order.push(t);
                }
            }
        }
        (order.len() == self.vertices).then_some(order)
    }

    /// All structural violations. Vertices off every source-to-sink path are
    /// allowed here and removed by [`Abp::pruned`].
    pub fn validate(&self) -> Vec<AbpViolation> {
        let mut out = Vec::new();
        if self.source >= self.vertices || self.sink >= self.vertices || self.source == self.sink {
            out.push(AbpViolation::BadTerminals);
            return out;
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.from >= self.vertices || e.to >= self.vertices {
                out.push(AbpViolation::DanglingEdge(i));
            }
            let ok = match &e.label {
                EdgeLabel::Var(v) => self.vars.contains(*v),
                EdgeLabel::Const(s) => self.field.contains(s),
            };
            if !ok {
                out.push(AbpViolation::BadLabel(i));
            }
        }
        if !out.is_empty() {
            return out;
        }
        if self.edges.iter().any(|e| e.to == self.source) {
            out.push(AbpViolation::SourceHasInEdges);
        }
        if self.edges.iter().any(|e| e.from == self.sink) {
            out.push(AbpViolation::SinkHasOutEdges);
        }
        if self.topo_order().is_none() {
            out.push(AbpViolation::Cycle);
        }
        out
    }

    fn check(&self) -> Result<(), CircuitError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(CircuitError::Precondition(alloc::format!(
                "invalid branching program: {v:?}"
            )))
        }
    }

    /// Copy restricted to vertices on some source-to-sink path, renumbered in
    /// increasing original order.
    pub fn pruned(&self) -> Result<Abp, CircuitError> {
        self.check()?;
        let n = self.vertices;
        let mut fwd = vec![false; n];
        let mut bwd = vec![false; n];
        let mut outs = vec![Vec::new(); n];
        let mut ins = vec![Vec::new(); n];
        for e in &self.edges {
            outs[e.from].push(e.to);
            ins[e.to].push(e.from);
        }
        let mut stack = vec![self.source];
        while let Some(v) = stack.pop() {
            if !core::mem::replace(&mut fwd[v], true) {
                stack.extend(outs[v].iter().copied());
            }
        }
        stack.push(self.sink);
        while let Some(v) = stack.pop() {
            if !core::mem::replace(&mut bwd[v], true) {
                stack.extend(ins[v].iter().copied());
            }
        }
        let mut keep: Vec<bool> = (0..n).map(|v| fwd[v] && bwd[v]).collect();
        keep[self.source] = true;
        keep[self.sink] = true;
        let mut map = vec![usize::MAX; n];
        let mut next = 0;
        for v in 0..n {
            if keep[v] {
                map[v] = next;
                next += 1;
            }
        }
        let mut out = Abp::new(
            self.field.clone(),
            self.vars.clone(),
            next,
            map[self.source],
            map[self.sink],
        );
        for e in &self.edges {
            if keep[e.from] && keep[e.to] && fwd[e.from] && bwd[e.to] {
                out.edge(map[e.from], map[e.to], e.label.clone());
            }
        }
        Ok(out)
    }

    /// Exact value by dynamic programming over a topological order.
    pub fn evaluate(&self, a: &Assignment) -> Result<Scalar, CircuitError> {
        self.check()?;
        if a.values.len() != self.vars.total() {
            return Err(CircuitError::MissingVariable(
                self.vars
                    .var_at(a.values.len().min(self.vars.total().saturating_sub(1))),
            ));
        }
        let f = &self.field;
        let order = self.topo_order().expect("validated");
        let mut outs = vec![Vec::new(); self.vertices];
        for (i, e) in self.edges.iter().enumerate() {
            outs[e.from].push(i);
        }
        let mut val = vec![f.zero(); self.vertices];
        val[self.source] = f.one();
        for &v in &order {
            if val[v].is_zero() {
                continue;
            }
            for &i in &outs[v] {
                let e = &self.edges[i];
                let w = match &e.label {
                    EdgeLabel::Var(x) => &a.values[self.vars.slot(*x)],
                    EdgeLabel::Const(s) => s,
                };
                let add = f.mul(&val[v], w);
                val[e.to] = f.add(&val[e.to], &add);
            }
        }
        Ok(val[self.sink].clone())
    }

    /// Value mod `q` at a point given by flat slots.
    pub fn eval_mod(&self, q: u64, point: &[u64]) -> Result<u64, CircuitError> {
        self.check()?;
        let order = self.topo_order().expect("validated");
        let mut labels = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            labels.push(match &e.label {
                EdgeLabel::Var(x) => point[self.vars.slot(*x)] % q,
                EdgeLabel::Const(s) => self
                    .field
                    .residue_mod(s, q)
                    .ok_or(CircuitError::BadReduction)?,
            });
        }
        let mut outs = vec![Vec::new(); self.vertices];
        for (i, e) in self.edges.iter().enumerate() {
            outs[e.from].push(i);
        }
        let mut val = vec![0u64; self.vertices];
        val[self.source] = 1 % q;
        for &v in &order {
            for &i in &outs[v] {
                let t = self.edges[i].to;
                val[t] = ((val[t] as u128 + val[v] as u128 * labels[i] as u128) % q as u128) as u64;
            }
        }
        Ok(val[self.sink])
    }

    /// Randomized identity test of this program against a single-output circuit.
    pub fn identity_test_circuit(
        &self,
        c: &Circuit,
        trials: usize,
        seed: u64,
    ) -> Result<IdentityVerdict, CircuitError> {
        if self.field != c.field
            || self.vars.x.len() != c.vars.x.len()
            || self.vars.y.len() != c.vars.y.len()
            || self.vars.z.len() != c.vars.z.len()
            || c.outputs.len() != 1
        {
            return Err(CircuitError::Mismatch(
                "program and circuit differ in shape".into(),
            ));
        }
        let q = test_modulus(&self.field, DEFAULT_PRIME)
            .ok_or_else(|| CircuitError::Precondition("modulus exceeds a machine word".into()))?;
        let me = ModEval::new(c, q)?;
        self.check()?;
        Ok(compare_mod(
            &self.field,
            self.vars.total(),
            q,
            trials,
            seed,
            |p| vec![self.eval_mod(q, p).expect("validated")],
            |p| me.eval(p),
        ))
    }
}
