//! Seeded random instances for tests and benchmarks.

use rand::Rng as _;

use super::{grid_bilinear_circuit, naive_bilinear_circuit};
use crate::circuit::{Abp, Circuit, EdgeLabel, GateKind, Var, VarSet};
use crate::scalar::{Field, Matrix, Scalar};
use crate::transforms::{planarize, reduce_degree};
use crate::util::rng;

fn small_scale(f: &Field, g: &mut crate::util::Rng) -> Scalar {
    if g.gen_bool(0.6) {
        return f.one();
    }
    let mut v = g.gen_range(-3i64..=3);
    if v == 0 {
        v = 2;
    }
    f.from_i64(v)
}

/// Random single-output circuit over `nx` x-variables with `gates` gates in
/// total. Op gates draw `2..=max_fanin` children (with repetition) from
/// earlier gates, biased towards recent ones; scales are small integers.
pub fn random_circuit(
    field: &Field,
    nx: usize,
    gates: usize,
    max_fanin: usize,
    seed: u64,
) -> Circuit {
    let mut g = rng(seed);
    let nx = nx.max(1);
    let mut c = Circuit::new(field.clone(), nx, 0, 0);
    let leaves = (gates / 4).clamp(1, gates.max(1));
    for i in 0..leaves {
        if i < nx {
            c.input(Var::x(i));
        } else if g.gen_bool(0.8) {
            c.input(Var::x(g.gen_range(0..nx)));
        } else {
            let s = field.from_i64(g.gen_range(1..=5));
            c.constant(s);
        }
    }
    for _ in leaves..gates {
        let n = c.size();
        let k = g.gen_range(2..=max_fanin.max(2));
        let kind = if g.gen_bool(0.5) {
            GateKind::Add
        } else {
            GateKind::Mul
        };
        let v = c.add_gate(kind);
        for _ in 0..k {
            let lo = n.saturating_sub(12);
            let u = if g.gen_bool(0.7) {
                g.gen_range(lo..n)
            } else {
                g.gen_range(0..n)
            };
            let s = small_scale(field, &mut g);
            c.wire(u, v, s);
        }
    }
    let out = c.size() - 1;
    c.output(out);
    c
}

/// Random ABP on `vertices` vertices (source 0, sink last) with about
/// `edges` forward edges; a source-to-sink spine keeps the sink reachable.
pub fn random_abp(field: &Field, nx: usize, vertices: usize, edges: usize, seed: u64) -> Abp {
    let mut g = rng(seed);
    let n = vertices.max(2);
    let mut p = Abp::new(
        field.clone(),
        VarSet::with_counts(nx.max(1), 0, 0),
        n,
        0,
        n - 1,
    );
    let label = |g: &mut crate::util::Rng| {
        if g.gen_bool(0.8) {
            EdgeLabel::Var(Var::x(g.gen_range(0..nx.max(1))))
        } else {
            EdgeLabel::Const(field.from_i64(g.gen_range(-3..=3)))
        }
    };
    for v in 0..n - 1 {
        let l = label(&mut g);
        p.edge(v, v + 1, l);
    }
    while p.edges.len() < edges {
        let a = g.gen_range(0..n - 1);
        let b = g.gen_range(a + 1..n);
        let l = label(&mut g);
        p.edge(a, b, l);
    }
    p
}

/// Random ABP whose graph is a `rows × cols` grid with right and down edges
/// (each kept with probability 3/4 besides a spanning staircase) plus
/// occasional diagonals inside a cell; always planar.
pub fn random_planar_abp(field: &Field, nx: usize, rows: usize, cols: usize, seed: u64) -> Abp {
    let mut g = rng(seed);
    let (r, k) = (rows.max(1), cols.max(1));
    let n = (r * k).max(2);
    let id = |i: usize, j: usize| i * k + j;
    let mut p = Abp::new(
        field.clone(),
        VarSet::with_counts(nx.max(1), 0, 0),
        n,
        0,
        n - 1,
    );
    let label = |g: &mut crate::util::Rng| {
        if g.gen_bool(0.85) {
            EdgeLabel::Var(Var::x(g.gen_range(0..nx.max(1))))
        } else {
            EdgeLabel::Const(field.from_i64(g.gen_range(1..=3)))
        }
    };
    if r * k == 1 {
        let l = label(&mut g);
        p.edge(0, 1, l);
        return p;
    }
    for i in 0..r {
        for j in 0..k {
            let staircase_right = i == r - 1 || (i + j) % 2 == 0;
            if j + 1 < k && (staircase_right || g.gen_bool(0.75)) {
                let l = label(&mut g);
                p.edge(id(i, j), id(i, j + 1), l);
            }
            if i + 1 < r && (!staircase_right || j == k - 1 || g.gen_bool(0.75)) {
                let l = label(&mut g);
                p.edge(id(i, j), id(i + 1, j), l);
            }
            if i + 1 < r && j + 1 < k && g.gen_bool(0.2) {
                let l = label(&mut g);
                p.edge(id(i, j), id(i + 1, j + 1), l);
            }
        }
    }
    p
}

/// Random planar circuit for a bilinear form with small integer
/// coefficients (rows `y`, columns `x`, every row and column nonzero).
/// Odd seeds give the read-once grid circuit, even seeds the naive circuit
/// after degree reduction and crossover planarization.
pub fn random_planar_bilinear(field: &Field, nx: usize, ny: usize, seed: u64) -> (Circuit, Matrix) {
    let mut g = rng(seed);
    let (nx, ny) = (nx.max(1), ny.max(1));
    let mut m = Matrix::zeros(field.clone(), ny, nx);
    for r in 0..ny {
        for c in 0..nx {
            if g.gen_bool(0.7) || r == c % ny || c == r % nx {
                let mut v = g.gen_range(-3i64..=3);
                if v == 0 {
                    v = 1;
                }
                m.set(r, c, field.from_i64(v));
            }
        }
    }
    let c = if seed % 2 == 1 {
        grid_bilinear_circuit(&m)
    } else {
        let (reduced, _) = reduce_degree(&naive_bilinear_circuit(&m)).expect("valid circuit");
        planarize(&reduced, seed).expect("fan-in two").0
    };
    (c, m)
}
