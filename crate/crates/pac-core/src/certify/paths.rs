//! Vertex-disjoint paths with a matching cut, and the multi-output
//! certificates built on them.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::CertifyError;
use crate::circuit::{Circuit, GateKind, VarKind};
use crate::flow::vertex_disjoint;
use crate::scalar::{Matrix, TotalRegularity};
use crate::separators::{forest_partition_tree, savage_partition};
use crate::transforms::{circuit_graph, planarize, reduce_degree};
use crate::util::{binom, next_combination, random_subset, rng};

/// Maximum family of vertex-disjoint paths and a minimum vertex cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointPathResult {
    /// Source vertices.
    pub sources: Vec<usize>,
    /// Sink vertices.
    pub sinks: Vec<usize>,
    /// Number of paths.
    pub count: usize,
    /// The paths, each from a source to a sink.
    pub paths: Vec<Vec<usize>>,
    /// Vertices meeting every source-to-sink path.
    pub cut: Vec<usize>,
}

impl DisjointPathResult {
    /// Each path starts at a source, ends at a sink and follows arcs; no
    /// vertex is shared.
    pub fn paths_valid(&self, n: usize, arcs: &[(usize, usize)]) -> bool {
        let arc_set: BTreeSet<(usize, usize)> = arcs.iter().copied().collect();
        let mut used = vec![false; n];
        self.paths.len() == self.count
            && self.paths.iter().all(|p| {
                !p.is_empty()
                    && self.sources.contains(&p[0])
                    && self.sinks.contains(p.last().expect("nonempty"))
                    && p.windows(2).all(|w| arc_set.contains(&(w[0], w[1])))
                    && p.iter()
                        .all(|&v| v < n && !core::mem::replace(&mut used[v], true))
            })
    }

    /// No sink is reachable from a source once the cut is deleted.
    pub fn cut_separates(&self, n: usize, arcs: &[(usize, usize)]) -> bool {
        let mut blocked = vec![false; n];
        for &v in &self.cut {
            blocked[v] = true;
        }
        let mut out = vec![Vec::new(); n];
        for &(a, b) in arcs {
            out[a].push(b);
        }
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = self
            .sources
            .iter()
            .copied()
            .filter(|&s| !blocked[s])
            .collect();
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(v) = stack.pop() {
            for &w in &out[v] {
                if !blocked[w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        self.sinks.iter().all(|&t| !seen[t])
    }

    /// Paths valid, cut separating, and as many paths as cut vertices.
    pub fn verify(&self, n: usize, arcs: &[(usize, usize)]) -> bool {
        self.count == self.cut.len() && self.paths_valid(n, arcs) && self.cut_separates(n, arcs)
    }
}

/// Maximum number of vertex-disjoint directed paths from `sources` to
/// `sinks` in the graph on `0..n` with the given arcs, by unit
/// vertex-capacity max-flow. A vertex in both sets is a path by itself.
pub fn max_disjoint_paths(
    n: usize,
    arcs: &[(usize, usize)],
    sources: &[usize],
    sinks: &[usize],
) -> DisjointPathResult {
    let flow = vertex_disjoint(n, arcs, sources, sinks);
    DisjointPathResult {
        sources: sources.to_vec(),
        sinks: sinks.to_vec(),
        count: flow.paths.len(),
        paths: flow.paths,
        cut: flow.cut,
    }
}

/// The wires of a circuit plus one extra vertex per x-variable (vertex
/// `size + i`) with an arc to each of its leaves, so that a family of
/// disjoint paths uses each variable at most once.
fn variable_graph(c: &Circuit) -> (usize, Vec<(usize, usize)>) {
    let s = c.size();
    let mut arcs: BTreeSet<(usize, usize)> = c.wires.iter().map(|w| (w.from, w.to)).collect();
    for (g, k) in c.gates.iter().enumerate() {
        if let GateKind::Input(v) = k {
            if v.kind == VarKind::X {
                arcs.insert((s + v.index, g));
            }
        }
    }
    (s + c.vars.x.len(), arcs.into_iter().collect())
}

/// Tally of the disjoint-path property: any `k` variables reach any `k`
/// outputs by `k` disjoint paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathClaimReport {
    /// Largest `k` tried.
    pub max_k: usize,
    /// Pairs of subsets tested.
    pub tested: u64,
    /// Whether every pair was enumerated.
    pub exhaustive: bool,
    /// Pairs `(variables, outputs)` with fewer than `k` paths.
    pub failures: Vec<(Vec<usize>, Vec<usize>)>,
}

/// Tests the disjoint-path property on `c` for `k = 1..=max_k`. Sizes with
/// at most `limit` subset pairs are enumerated; larger ones get `limit`
/// random pairs.
pub fn path_claim(c: &Circuit, max_k: usize, limit: u64, seed: u64) -> PathClaimReport {
    let (n, arcs) = variable_graph(c);
    let (nx, outs) = (c.vars.x.len(), c.outputs.clone());
    let base = c.size();
    let mut g = rng(seed);
    let mut report = PathClaimReport {
        max_k: max_k.min(nx).min(outs.len()),
        tested: 0,
        exhaustive: true,
        failures: Vec::new(),
    };
    let test = |vars: &[usize], os: &[usize], report: &mut PathClaimReport| {
        let sources: Vec<usize> = vars.iter().map(|&i| base + i).collect();
        let sinks: Vec<usize> = os.iter().map(|&o| outs[o]).collect();
        report.tested += 1;
        if max_disjoint_paths(n, &arcs, &sources, &sinks).count < vars.len() {
            report.failures.push((vars.to_vec(), os.to_vec()));
        }
    };
    for k in 1..=report.max_k {
        let pairs = binom(nx as u64, k as u64).saturating_mul(binom(outs.len() as u64, k as u64));
        if pairs <= u128::from(limit) {
            let mut vars: Vec<usize> = (0..k).collect();
            loop {
                let mut os: Vec<usize> = (0..k).collect();
                loop {
                    test(&vars, &os, &mut report);
                    if !next_combination(&mut os, outs.len()) {
                        break;
                    }
                }
                if !next_combination(&mut vars, nx) {
                    break;
                }
            }
        } else {
            report.exhaustive = false;
            for _ in 0..limit {
                let vars = random_subset(&mut g, nx, k);
                let os = random_subset(&mut g, outs.len(), k);
                test(&vars, &os, &mut report);
            }
        }
    }
    report
}

/// Partition model used by a multi-output certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultiOutputModel {
    /// Forest partition tree of a formula.
    Formula,
    /// Planar partition of a planar circuit.
    Planar,
}

/// One part of a multi-output certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartReport {
    /// Gates in the part.
    pub vertices: usize,
    /// Input gates in the part.
    pub inputs: usize,
    /// Outputs in the part.
    pub outputs: usize,
    /// Variables with no leaf in the part or its separator.
    pub excluded: usize,
    /// `min(outputs, excluded)`: paths the disjoint-path property demands.
    pub demand: usize,
    /// Disjoint paths found from excluded variables to the part's outputs.
    pub routed: usize,
    /// `|S_i|`.
    pub separator: usize,
    /// Every routed path meets the separator.
    pub through_separator: bool,
}

/// Multi-output certificate: per part `(demand, |S_i|)` with flow checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiOutputReport {
    /// Partition model.
    pub model: MultiOutputModel,
    /// Whether a crossover planarization was applied first.
    pub planarized: bool,
    /// Gates of the partitioned circuit.
    pub size: usize,
    /// Parts requested.
    pub p: usize,
    /// Total regularity of the map; `None` if the check ran out of budget.
    pub regular: Option<bool>,
    /// One entry per part.
    pub parts: Vec<PartReport>,
}

impl MultiOutputReport {
    /// Routed paths cross the separator (so `routed <= |S_i|`), and when the
    /// map is not known to be irregular every demand is met.
    pub fn consistent(&self) -> bool {
        self.parts.iter().all(|p| {
            p.through_separator
                && p.routed <= p.separator
                && (self.regular == Some(false) || p.routed == p.demand)
        })
    }
}

/// Minors examined when testing the map for total regularity.
const REGULARITY_BUDGET: u64 = 1 << 20;

/// Partitions the gate graph of a multi-output linear circuit with the
/// outputs distinguished into `p` parts (forest partition tree for
/// formulas, planar partition otherwise, planarizing first if needed) and
/// checks per part that the outputs are reached from the variables read
/// only outside by disjoint paths, all crossing the part's separator.
pub fn multi_output_certificate(
    c: &Circuit,
    m: &Matrix,
    p: usize,
    seed: u64,
) -> Result<MultiOutputReport, CertifyError> {
    let got = c.extract_linear_map()?;
    if got != *m {
        return Err(CertifyError::Mismatch(
            "circuit does not compute the given map".into(),
        ));
    }
    let regular = match m.is_totally_regular(REGULARITY_BUDGET, seed)? {
        TotalRegularity::Yes => Some(true),
        TotalRegularity::No { .. } => Some(false),
        TotalRegularity::BudgetExceeded { .. } => None,
    };
    let formula = c.is_formula();
    let mut planarized = false;
    let owned;
    let mut c = c;
    if !formula && !c.is_planar() {
        let reduced = if c.in_degrees().into_iter().any(|d| d > 2) {
            reduce_degree(c)?.0
        } else {
            c.clone()
        };
        owned = planarize(&reduced, seed)?.0;
        c = &owned;
        planarized = true;
    }
    let g = circuit_graph(c).0;
    let outs: Vec<usize> = c
        .outputs
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let (parts, seps) = if formula {
        let t = forest_partition_tree(&g, &outs, p)?;
        let leaf = |l: &usize| &t.nodes[*l];
        (
            t.leaves
                .iter()
                .map(|l| leaf(l).vertices.clone())
                .collect::<Vec<_>>(),
            t.leaves
                .iter()
                .map(|l| leaf(l).separator.clone())
                .collect::<Vec<_>>(),
        )
    } else {
        let r = savage_partition(&g, &outs, p)?;
        (r.parts, r.separators)
    };
    let (n, arcs) = variable_graph(c);
    let nx = c.vars.x.len();
    let mut is_out = vec![false; c.size()];
    for &o in &outs {
        is_out[o] = true;
    }
    let mut reports = Vec::with_capacity(parts.len());
    for (part, sep) in parts.iter().zip(&seps) {
        let mut blocked = vec![false; nx];
        let mut inputs = 0;
        for &v in part.iter().chain(sep) {
            if let GateKind::Input(var) = &c.gates[v] {
                if var.kind == VarKind::X {
                    blocked[var.index] = true;
                }
            }
        }
        for &v in part {
            if matches!(c.gates[v], GateKind::Input(_)) {
                inputs += 1;
            }
        }
        let sources: Vec<usize> = (0..nx)
            .filter(|&i| !blocked[i])
            .map(|i| c.size() + i)
            .collect();
        let sinks: Vec<usize> = part.iter().copied().filter(|&v| is_out[v]).collect();
        let flow = max_disjoint_paths(n, &arcs, &sources, &sinks);
        let in_sep: BTreeSet<usize> = sep.iter().copied().collect();
        reports.push(PartReport {
            vertices: part.len(),
            inputs,
            outputs: sinks.len(),
            excluded: sources.len(),
            demand: sources.len().min(sinks.len()),
            routed: flow.count,
            separator: sep.len(),
            through_separator: flow
                .paths
                .iter()
                .all(|path| path.iter().any(|v| in_sep.contains(v))),
        });
    }
    Ok(MultiOutputReport {
        model: if formula {
            MultiOutputModel::Formula
        } else {
            MultiOutputModel::Planar
        },
        planarized,
        size: c.size(),
        p,
        regular,
        parts: reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Var;
    use crate::scalar::Field;

    #[test]
    fn bipartite_and_bottleneck() {
        let arcs = [(0, 2), (0, 3), (1, 2), (1, 3)];
        let r = max_disjoint_paths(4, &arcs, &[0, 1], &[2, 3]);
        assert_eq!(r.count, 2);
        assert!(r.verify(4, &arcs));
        let arcs = [(0, 2), (1, 2), (2, 3), (2, 4)];
        let r = max_disjoint_paths(5, &arcs, &[0, 1], &[3, 4]);
        assert_eq!(r.count, 1);
        assert_eq!(r.cut, vec![2]);
        assert!(r.verify(5, &arcs));
    }

    #[test]
    fn identity_by_wires() {
        let f = Field::Rationals;
        let n = 4;
        let mut c = Circuit::new(f.clone(), n, 0, 0);
        for i in 0..n {
            let x = c.input(Var::x(i));
            let a = c.add(&[x]);
            c.output(a);
        }
        let r = multi_output_certificate(&c, &Matrix::identity(f, n), 2, 0).unwrap();
        assert_eq!(r.model, MultiOutputModel::Formula);
        assert_eq!(r.regular, Some(false));
        assert!(r.parts.iter().all(|p| p.separator == 0 && p.routed == 0));
        assert!(r.consistent());
    }
}
