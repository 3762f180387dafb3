//! Superconcentrators, their verifier, random weightings with a totally
//! regular linear map, and the branching programs, circuits and bilinear
//! formulas built from a weighted superconcentrator.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::Rng as _;

use super::ConstructionError;
use crate::circuit::{Abp, Circuit, EdgeLabel, GateId, Var, VarSet};
use crate::flow::vertex_disjoint;
use crate::scalar::{Field, Matrix, Scalar, TotalRegularity};
use crate::util::{binom, next_combination, rng};

/// A DAG with ordered inputs `I_1..I_n` and outputs `O_1..O_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SCGraph {
    /// Vertex count; vertices are `0..vertices`.
    pub vertices: usize,
    /// Input vertices in order.
    pub inputs: Vec<usize>,
    /// Output vertices in order.
    pub outputs: Vec<usize>,
    /// Directed edges.
    pub edges: Vec<(usize, usize)>,
}

impl SCGraph {
    /// Checks shape: equal terminal counts, distinct in-range terminals,
    /// inputs without in-edges, outputs without out-edges, no cycle.
    pub fn new(
        vertices: usize,
        inputs: Vec<usize>,
        outputs: Vec<usize>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, ConstructionError> {
        let bad = |msg: &str| Err(ConstructionError::Parameter(msg.into()));
        if inputs.len() != outputs.len() {
            return bad("input and output counts differ");
        }
        let mut role = vec![0u8; vertices];
        for (&v, r) in inputs
            .iter()
            .map(|v| (v, 1))
            .chain(outputs.iter().map(|v| (v, 2)))
        {
            if v >= vertices || role[v] != 0 {
                return bad("terminals must be distinct vertices in range");
            }
            role[v] = r;
        }
        for &(a, b) in &edges {
            if a >= vertices || b >= vertices || a == b {
                return bad("edge endpoint out of range or loop");
            }
            if role[b] == 1 || role[a] == 2 {
                return Err(ConstructionError::Parameter(format!(
                    "edge {a} -> {b} enters an input or leaves an output"
                )));
            }
        }
        let g = SCGraph {
            vertices,
            inputs,
            outputs,
            edges,
        };
        if g.topo_order().is_none() {
            return bad("graph has a cycle");
        }
        Ok(g)
    }

    /// Number of input/output pairs.
    pub fn n(&self) -> usize {
        self.inputs.len()
    }

    /// Topological order, or `None` on a cycle.
    pub fn topo_order(&self) -> Option<Vec<usize>> {
        let mut indeg = vec![0usize; self.vertices];
        let mut out = vec![Vec::new(); self.vertices];
        for &(a, b) in &self.edges {
            indeg[b] += 1;
            out[a].push(b);
        }
        let mut order: Vec<usize> = (0..self.vertices).filter(|&v| indeg[v] == 0).collect();
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &w in &out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    order.push(w);
                }
            }
        }
        (order.len() == self.vertices).then_some(order)
    }

    /// Length in edges of the longest path.
    pub fn depth(&self) -> usize {
        let order = self.topo_order().expect("acyclic by construction");
        let mut out = vec![Vec::new(); self.vertices];
        for &(a, b) in &self.edges {
            out[a].push(b);
        }
        let mut d = vec![0usize; self.vertices];
        for &v in &order {
            for &w in &out[v] {
                d[w] = d[w].max(d[v] + 1);
            }
        }
        d.into_iter().max().unwrap_or(0)
    }

    /// Middle vertices of a layered depth-2 graph, in increasing order.
    /// Errors unless every edge runs input to middle or middle to output.
    pub fn middle_layer(&self) -> Result<Vec<usize>, ConstructionError> {
        let depth = self.depth();
        if depth != 2 {
            return Err(ConstructionError::Depth {
                expected: 2,
                found: depth,
            });
        }
        let mut role = vec![0u8; self.vertices];
        for &v in &self.inputs {
            role[v] = 1;
        }
        for &v in &self.outputs {
            role[v] = 2;
        }
        for &(a, b) in &self.edges {
            if !(role[a] == 1 && role[b] == 0 || role[a] == 0 && role[b] == 2) {
                return Err(ConstructionError::Parameter(format!(
                    "edge {a} -> {b} skips the middle layer"
                )));
            }
        }
        Ok((0..self.vertices).filter(|&v| role[v] == 0).collect())
    }
}

/// Complete bipartite graph from `n` inputs (vertices `0..n`) to `n`
/// outputs (`n..2n`).
pub fn sc_complete(n: usize) -> SCGraph {
    let edges = (0..n)
        .flat_map(|i| (0..n).map(move |o| (i, n + o)))
        .collect();
    SCGraph {
        vertices: 2 * n,
        inputs: (0..n).collect(),
        outputs: (n..2 * n).collect(),
        edges,
    }
}

/// Layered depth-2 graph: inputs `0..n`, middle `n..n+k`, outputs after,
/// complete between consecutive layers. A superconcentrator when `k >= n`.
pub fn sc_depth2(n: usize, k: usize) -> SCGraph {
    let mut edges = Vec::with_capacity(2 * n * k);
    for m in 0..k {
        edges.extend((0..n).map(|i| (i, n + m)));
    }
    for m in 0..k {
        edges.extend((0..n).map(|o| (n + m, n + k + o)));
    }
    SCGraph {
        vertices: 2 * n + k,
        inputs: (0..n).collect(),
        outputs: (n + k..2 * n + k).collect(),
        edges,
    }
}

/// Beneš network on `2^m >= n` lines with `O(n log n)` edges. Stage `l`
/// joins lines `v` and `v ^ 2^b` for bits `b = 0, 1, .., m-1, .., 1, 0`;
/// the network routes every permutation on vertex-disjoint paths, so any
/// `k` inputs reach any `k` outputs. Inputs are the first `n` lines of the
/// first level, outputs the first `n` of the last.
pub fn sc_recursive(n: usize) -> SCGraph {
    if n <= 1 {
        return sc_complete(n);
    }
    let m = (usize::BITS - (n - 1).leading_zeros()) as usize;
    let lines = 1usize << m;
    let bits: Vec<usize> = (0..m).chain((0..m - 1).rev()).collect();
    let levels = bits.len() + 1;
    let id = |level: usize, v: usize| level * lines + v;
    let mut edges = Vec::with_capacity(2 * lines * bits.len());
    for (l, &b) in bits.iter().enumerate() {
        for v in 0..lines {
            edges.push((id(l, v), id(l + 1, v)));
            edges.push((id(l, v), id(l + 1, v ^ (1 << b))));
        }
    }
    SCGraph {
        vertices: levels * lines,
        inputs: (0..n).map(|v| id(0, v)).collect(),
        outputs: (0..n).map(|v| id(levels - 1, v)).collect(),
        edges,
    }
}

/// Outcome of [`verify_superconcentrator`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScVerdict {
    /// Every pair of equal-size terminal subsets was checked.
    Yes,
    /// Subsets (0-based positions in the input and output lists) joined by
    /// fewer than `|inputs|` vertex-disjoint paths.
    No {
        /// Input positions.
        inputs: Vec<usize>,
        /// Output positions.
        outputs: Vec<usize>,
        /// Maximum number of disjoint paths.
        flow: usize,
    },
    /// Too many subset pairs; this many random pairs passed.
    SampledPass {
        /// Pairs tested.
        tested: u64,
    },
}

/// Number of subset pairs `Σ_k C(n,k)^2`.
pub fn sc_pair_count(n: usize) -> u128 {
    (1..=n as u64)
        .map(|k| binom(n as u64, k).saturating_mul(binom(n as u64, k)))
        .sum()
}

/// Checks by unit vertex-capacity max flow that every `k` inputs reach every
/// `k` outputs along `k` vertex-disjoint paths. Exhaustive when the pair
/// count is at most `exhaustive_limit`, otherwise that many random pairs.
pub fn verify_superconcentrator(g: &SCGraph, exhaustive_limit: u64, seed: u64) -> ScVerdict {
    let n = g.n();
    let check = |ins: &[usize], outs: &[usize]| -> Option<ScVerdict> {
        let src: Vec<usize> = ins.iter().map(|&i| g.inputs[i]).collect();
        let dst: Vec<usize> = outs.iter().map(|&o| g.outputs[o]).collect();
        let flow = vertex_disjoint(g.vertices, &g.edges, &src, &dst)
            .paths
            .len();
        (flow < ins.len()).then(|| ScVerdict::No {
            inputs: ins.to_vec(),
            outputs: outs.to_vec(),
            flow,
        })
    };
    if sc_pair_count(n) <= u128::from(exhaustive_limit) {
        for k in 1..=n {
            let mut ins: Vec<usize> = (0..k).collect();
            loop {
                let mut outs: Vec<usize> = (0..k).collect();
                loop {
                    if let Some(bad) = check(&ins, &outs) {
                        return bad;
                    }
                    if !next_combination(&mut outs, n) {
                        break;
                    }
                }
                if !next_combination(&mut ins, n) {
                    break;
                }
            }
        }
        return ScVerdict::Yes;
    }
    let mut r = rng(seed);
    for _ in 0..exhaustive_limit {
        let k = r.gen_range(1..=n);
        let mut ins = sample(&mut r, n, k).into_vec();
        let mut outs = sample(&mut r, n, k).into_vec();
        ins.sort_unstable();
        outs.sort_unstable();
        if let Some(bad) = check(&ins, &outs) {
            return bad;
        }
    }
    ScVerdict::SampledPass {
        tested: exhaustive_limit,
    }
}

/// Settings for [`assign_strassen_weights`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrassenConfig {
    /// Weights are drawn uniformly from `1..=sample_max` (capped below the
    /// characteristic over a prime field).
    pub sample_max: u64,
    /// Attempts before giving up.
    pub max_retries: usize,
    /// Largest minor count checked; bigger matrices are rejected.
    pub minor_budget: u64,
}

impl Default for StrassenConfig {
    fn default() -> Self {
        StrassenConfig {
            sample_max: 1 << 16,
            max_retries: 3,
            minor_budget: 1 << 24,
        }
    }
}

/// A weighting whose linear map is totally regular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrassenWeights {
    /// Weight per edge, aligned with `SCGraph::edges`.
    pub weights: Vec<Scalar>,
    /// Linear circuit: `x_i` at input `I_i`, an add gate per other vertex.
    pub circuit: Circuit,
    /// `M[o][i]`: coefficient of `x_i` at output `O_o`.
    pub matrix: Matrix,
    /// Attempts used, including the successful one.
    pub attempts: usize,
}

/// Draws random edge weights until the linear map from inputs to outputs
/// is totally regular, checking every square minor each time.
pub fn assign_strassen_weights(
    g: &SCGraph,
    field: &Field,
    seed: u64,
    config: &StrassenConfig,
) -> Result<StrassenWeights, ConstructionError> {
    let n = g.n();
    if Matrix::minor_count(n) > u128::from(config.minor_budget) {
        return Err(ConstructionError::Parameter(format!(
            "{} minors exceed the budget of {}",
            Matrix::minor_count(n),
            config.minor_budget
        )));
    }
    let hi = match field.modulus_u64() {
        Some(q) => config.sample_max.min(q - 1),
        None => config.sample_max,
    }
    .max(1);
    let mut r = rng(seed);
    for attempt in 1..=config.max_retries {
        let weights: Vec<Scalar> = g
            .edges
            .iter()
            .map(|_| field.from_u64(r.gen_range(1..=hi)))
            .collect();
        let circuit = weighted_circuit(g, field, &weights);
        let matrix = circuit.extract_linear_map()?;
        if matrix.is_totally_regular(config.minor_budget, seed)? == TotalRegularity::Yes {
            return Ok(StrassenWeights {
                weights,
                circuit,
                matrix,
                attempts: attempt,
            });
        }
    }
    Err(ConstructionError::RetriesExhausted(config.max_retries))
}

/// Linear circuit of a weighted graph. Vertices not reached from an input
/// compute zero and are folded into constants.
fn weighted_circuit(g: &SCGraph, field: &Field, weights: &[Scalar]) -> Circuit {
    let n = g.n();
    let mut c = Circuit::new(field.clone(), n, 0, 0);
    let mut ins = vec![Vec::new(); g.vertices];
    for (e, &(a, b)) in g.edges.iter().enumerate() {
        ins[b].push((a, e));
    }
    let mut gate: Vec<Option<GateId>> = vec![None; g.vertices];
    for (i, &v) in g.inputs.iter().enumerate() {
        gate[v] = Some(c.input(Var::x(i)));
    }
    for v in g.topo_order().expect("acyclic") {
        if gate[v].is_some() {
            continue;
        }
        let terms: Vec<(GateId, Scalar)> = ins[v]
            .iter()
            .filter_map(|&(a, e)| gate[a].map(|ga| (ga, weights[e].clone())))
            .collect();
        if !terms.is_empty() {
            gate[v] = Some(c.add_scaled(&terms));
        }
    }
    for &o in &g.outputs {
        let out = match gate[o] {
            Some(x) => x,
            None => c.constant(field.zero()),
        };
        c.output(out);
    }
    c.prune_unreachable()
}

/// Branching program with a new source joined to input `I_i` by `x_i`, the
/// weighted graph in the middle, and output `O_j` joined to a new sink by
/// `y_j`; it computes `y^T M x`.
pub fn abp_from_superconcentrator(
    g: &SCGraph,
    field: &Field,
    weights: &[Scalar],
) -> Result<Abp, ConstructionError> {
    if weights.len() != g.edges.len() {
        return Err(ConstructionError::Parameter(format!(
            "{} weights for {} edges",
            weights.len(),
            g.edges.len()
        )));
    }
    for w in weights {
        field.check(w)?;
    }
    let n = g.n();
    let (s, t) = (g.vertices, g.vertices + 1);
    let mut p = Abp::new(
        field.clone(),
        VarSet::with_counts(n, n, 0),
        g.vertices + 2,
        s,
        t,
    );
    for (i, &v) in g.inputs.iter().enumerate() {
        p.edge(s, v, EdgeLabel::Var(Var::x(i)));
    }
    for (&(a, b), w) in g.edges.iter().zip(weights) {
        p.edge(a, b, EdgeLabel::Const(w.clone()));
    }
    for (j, &v) in g.outputs.iter().enumerate() {
        p.edge(v, t, EdgeLabel::Var(Var::y(j)));
    }
    Ok(p)
}

/// Degree-4 circuit for a depth-2 graph: `x_i` at the inputs, an add gate
/// per other vertex, every edge `e` a product with a fresh variable `z_e`,
/// and the outputs multiplied by `y_j` and summed.
pub fn benor_circuit(g: &SCGraph, field: &Field) -> Result<Circuit, ConstructionError> {
    let depth = g.depth();
    if depth != 2 {
        return Err(ConstructionError::Depth {
            expected: 2,
            found: depth,
        });
    }
    let n = g.n();
    let mut c = Circuit::new(field.clone(), n, n, g.edges.len());
    let mut ins = vec![Vec::new(); g.vertices];
    for (e, &(a, b)) in g.edges.iter().enumerate() {
        ins[b].push((a, e));
    }
    let mut gate: Vec<Option<GateId>> = vec![None; g.vertices];
    for (i, &v) in g.inputs.iter().enumerate() {
        gate[v] = Some(c.input(Var::x(i)));
    }
    for v in g.topo_order().expect("acyclic") {
        if gate[v].is_some() {
            continue;
        }
        let mut terms = Vec::new();
        for &(a, e) in &ins[v] {
            if let Some(ga) = gate[a] {
                let z = c.input(Var::z(e));
                terms.push(c.mul(&[ga, z]));
            }
        }
        if !terms.is_empty() {
            gate[v] = Some(c.add(&terms));
        }
    }
    let mut products = Vec::new();
    for (j, &o) in g.outputs.iter().enumerate() {
        if let Some(go) = gate[o] {
            let y = c.input(Var::y(j));
            products.push(c.mul(&[go, y]));
        }
    }
    let out = match products.as_slice() {
        [] => c.constant(field.zero()),
        [p] => *p,
        _ => c.add(&products),
    };
    c.output(out);
    Ok(c)
}

/// `Σ_i (u_i · y)(v_i · x)`: a sum of rank-one bilinear forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearFormula {
    /// Scalar field.
    pub field: Field,
    /// Length of every `v_i` (the `x` dimension).
    pub inputs: usize,
    /// Length of every `u_i` (the `y` dimension).
    pub outputs: usize,
    /// Pairs `(u_i, v_i)`.
    pub terms: Vec<(Vec<Scalar>, Vec<Scalar>)>,
}

impl BilinearFormula {
    /// Total number of nonzero vector entries.
    pub fn size(&self) -> usize {
        self.terms
            .iter()
            .map(|(u, v)| u.iter().chain(v).filter(|s| !s.is_zero()).count())
            .sum()
    }

    /// `Σ u_i v_i^T`, rows indexed by `y`, columns by `x`.
    pub fn matrix(&self) -> Matrix {
        let f = &self.field;
        Matrix::from_fn(f.clone(), self.outputs, self.inputs, |r, c| {
            self.terms
                .iter()
                .fold(f.zero(), |acc, (u, v)| f.add(&acc, &f.mul(&u[r], &v[c])))
        })
    }

    /// Formula circuit: per term, a product of two linear forms; the
    /// products are summed.
    pub fn to_circuit(&self) -> Circuit {
        let f = self.field.clone();
        let mut c = Circuit::new(f.clone(), self.inputs, self.outputs, 0);
        let mut products = Vec::new();
        for (u, v) in &self.terms {
            let form = |vec: &[Scalar], var: fn(usize) -> Var, c: &mut Circuit| -> Option<GateId> {
                let terms: Vec<(GateId, Scalar)> = vec
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| !s.is_zero())
                    .map(|(i, s)| (c.input(var(i)), s.clone()))
                    .collect();
                (!terms.is_empty()).then(|| c.add_scaled(&terms))
            };
            if let (Some(a), Some(b)) = (form(u, Var::y, &mut c), form(v, Var::x, &mut c)) {
                products.push(c.mul(&[a, b]));
            }
        }
        let out = match products.as_slice() {
            [] => c.constant(f.zero()),
            [p] => *p,
            _ => c.add(&products),
        };
        c.output(out);
        c
    }
}

/// Reads `M = U V` off the two edge layers of a depth-2 graph: middle
/// vertex `m` gives `u[o] = w(m -> O_o)` and `v[i] = w(I_i -> m)`.
pub fn bilinear_formula_from_depth2(
    g: &SCGraph,
    field: &Field,
    weights: &[Scalar],
) -> Result<BilinearFormula, ConstructionError> {
    let middle = g.middle_layer()?;
    if weights.len() != g.edges.len() {
        return Err(ConstructionError::Parameter(format!(
            "{} weights for {} edges",
            weights.len(),
            g.edges.len()
        )));
    }
    let n = g.n();
    let mut pos_in = vec![usize::MAX; g.vertices];
    let mut pos_out = vec![usize::MAX; g.vertices];
    let mut pos_mid = vec![usize::MAX; g.vertices];
    for (i, &v) in g.inputs.iter().enumerate() {
        pos_in[v] = i;
    }
    for (j, &v) in g.outputs.iter().enumerate() {
        pos_out[v] = j;
    }
    for (k, &v) in middle.iter().enumerate() {
        pos_mid[v] = k;
    }
    let mut terms = vec![(vec![field.zero(); n], vec![field.zero(); n]); middle.len()];
    for (&(a, b), w) in g.edges.iter().zip(weights) {
        field.check(w)?;
        if pos_in[a] != usize::MAX {
            let t = &mut terms[pos_mid[b]].1[pos_in[a]];
            *t = field.add(t, w);
        } else {
            let t = &mut terms[pos_mid[a]].0[pos_out[b]];
            *t = field.add(t, w);
        }
    }
    Ok(BilinearFormula {
        field: field.clone(),
        inputs: n,
        outputs: n,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn complete_graphs() {
        assert_eq!(sc_complete(2).edges.len(), 4);
        assert_eq!(sc_complete(5).edges.len(), 25);
        assert_eq!(
            verify_superconcentrator(&sc_complete(4), 1 << 20, 0),
            ScVerdict::Yes
        );
        assert_eq!(sc_depth2(3, 3).depth(), 2);
    }

    #[test]
    fn path_is_not_a_superconcentrator() {
        let g = SCGraph::new(4, vec![0, 1], vec![2, 3], vec![(0, 2)]).unwrap();
        match verify_superconcentrator(&g, 1 << 20, 0) {
            ScVerdict::No {
                inputs,
                outputs,
                flow,
            } => {
                assert_eq!((inputs, outputs, flow), (vec![0], vec![1], 0));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn benes_networks() {
        for n in [1, 2, 3, 5, 8] {
            assert_eq!(
                verify_superconcentrator(&sc_recursive(n), 1 << 20, 0),
                ScVerdict::Yes,
                "n = {n}"
            );
        }
        let g = sc_recursive(16);
        assert_eq!(g.edges.len(), 2 * 16 * 7);
        assert!(matches!(
            verify_superconcentrator(&g, 2000, 1),
            ScVerdict::SampledPass { .. }
        ));
    }

    #[test]
    fn shape_errors() {
        assert!(SCGraph::new(2, vec![0], vec![1], vec![(1, 0)]).is_err());
        assert!(SCGraph::new(3, vec![0], vec![1, 2], vec![]).is_err());
        assert!(matches!(
            benor_circuit(&sc_complete(2), &q()),
            Err(ConstructionError::Depth {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn strassen_on_complete_two() {
        let w =
            assign_strassen_weights(&sc_complete(2), &q(), 7, &StrassenConfig::default()).unwrap();
        assert_eq!(
            w.matrix.is_totally_regular(1 << 10, 0).unwrap(),
            TotalRegularity::Yes
        );
        // depth one: the matrix is the weights themselves
        assert_eq!(w.matrix.get(1, 0), &w.weights[1]);
    }

    #[test]
    fn disconnected_input_always_fails() {
        let g = SCGraph::new(4, vec![0, 1], vec![2, 3], vec![(0, 2), (0, 3), (1, 2)]).unwrap();
        let cfg = StrassenConfig {
            max_retries: 4,
            ..StrassenConfig::default()
        };
        assert_eq!(
            assign_strassen_weights(&g, &q(), 0, &cfg),
            Err(ConstructionError::RetriesExhausted(4))
        );
    }

    #[test]
    fn one_path_benor() {
        let g = SCGraph::new(3, vec![0], vec![2], vec![(0, 1), (1, 2)]).unwrap();
        let c = benor_circuit(&g, &q()).unwrap();
        let v = |x: i64| q().from_i64(x);
        let a = crate::circuit::Assignment::new(vec![v(2)], vec![v(5)], vec![v(3), v(7)]);
        assert_eq!(c.evaluate(&a).unwrap(), vec![v(210)]);
    }

    #[test]
    fn depth_two_formula() {
        let g = SCGraph::new(3, vec![0], vec![2], vec![(0, 1), (1, 2)]).unwrap();
        let f = bilinear_formula_from_depth2(&g, &q(), &[q().one(), q().one()]).unwrap();
        assert_eq!(f.terms, vec![(vec![q().one()], vec![q().one()])]);
        assert_eq!(f.matrix(), Matrix::identity(q(), 1));
    }
}
