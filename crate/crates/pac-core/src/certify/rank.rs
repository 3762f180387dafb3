//! Separator-plus-rank certificates for planar and read-once planar
//! circuits computing bilinear forms.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng as _;

use super::CertifyError;
use crate::circuit::{affine_parts, rebuild_bilinear, Circuit, GateKind, Var, VarKind};
use crate::planar::UGraph;
use crate::scalar::{Field, Matrix, Scalar};
use crate::separators::{lipton_tarjan, turan_partition, Label, TuranStrategy};
use crate::transforms::{bilinearize, circuit_graph, reduce_degree, substitute};
use crate::util::rng;

/// Trials for the identity checks inside the pipelines.
const TRIALS: usize = 20;

/// Which lower-bound argument a certificate executes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PipelineKind {
    /// Low-read variable halves, labelled partition, zero substitution.
    Planar,
    /// Weighted planar separator on the variable leaves.
    ReadOnce,
}

impl fmt::Display for PipelineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PipelineKind::Planar => "planar",
            PipelineKind::ReadOnce => "read-once",
        })
    }
}

/// Outcome of comparing `rank(M')` with `3 |separator|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `rank(M') <= 3 |separator|`.
    Consistent,
    /// The inequality fails, which means a bug somewhere in the pipeline.
    Inconsistent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "CONSISTENT",
            Verdict::Inconsistent => "INCONSISTENT",
        })
    }
}

/// Where a component of the circuit graph minus the separator sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ComponentClass {
    /// No surviving y-leaves.
    YFree,
    /// Surviving y-leaves but no surviving x-leaves.
    XFree,
    /// The separator itself.
    Separator,
}

/// Span check of the linear forms feeding product gates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReport {
    /// Dimension of the separator gates' y-linear parts.
    pub y_span: usize,
    /// Dimension of the separator gates' x-linear parts.
    pub x_span: usize,
    /// Product gates outside the separator whose operand forms were checked.
    pub checked: usize,
    /// Product gates whose operand form left the separator span.
    pub failures: Vec<usize>,
    /// Components holding surviving leaves of both kinds.
    pub straddling: usize,
}

impl SplitReport {
    /// No failures and no straddling component.
    pub fn holds(&self) -> bool {
        self.failures.is_empty() && self.straddling == 0
    }
}

/// Rank of a random combination of the product gates of one class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRank {
    /// The class.
    pub class: ComponentClass,
    /// Product gates in it.
    pub products: usize,
    /// Rank of the combined bilinear part.
    pub rank: usize,
}

/// Per-class ranks against the bound `|separator|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilrankReport {
    /// One entry per class.
    pub classes: Vec<ClassRank>,
    /// `|separator|`.
    pub bound: usize,
}

impl BilrankReport {
    /// Every class rank is at most the bound.
    pub fn holds(&self) -> bool {
        self.classes.iter().all(|c| c.rank <= self.bound)
    }
}

/// Record of one run of a rank pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    /// Pipeline executed.
    pub kind: PipelineKind,
    /// Gates of the bilinearized circuit.
    pub bilinear_size: usize,
    /// Low-read x-variables (planar pipeline only).
    pub x0: Vec<usize>,
    /// Low-read y-variables (planar pipeline only).
    pub y0: Vec<usize>,
    /// Largest read count over `x0` and `y0`; 1 for the read-once pipeline.
    pub k: usize,
    /// Surviving x-variables (columns of `submatrix`).
    pub x1: Vec<usize>,
    /// Surviving y-variables (rows of `submatrix`).
    pub y1: Vec<usize>,
    /// Separator gates of the bilinearized circuit.
    pub separator: Vec<usize>,
    /// Strategy that produced the planar separator.
    pub strategy: Option<TuranStrategy>,
    /// Labels the planar partition started from.
    pub labels: usize,
    /// `M` restricted to rows `y1` and columns `x1`.
    pub submatrix: Matrix,
    /// `rank(submatrix)`.
    pub rank: usize,
    /// `3 |separator|`.
    pub bound: usize,
    /// Span check of product operands.
    pub split: SplitReport,
    /// Per-class combination ranks.
    pub bilrank: BilrankReport,
}

impl RankCertificate {
    /// Verdict recomputed from the fields.
    pub fn verdict(&self) -> Verdict {
        if self.rank <= 3 * self.separator.len() {
            Verdict::Consistent
        } else {
            Verdict::Inconsistent
        }
    }

    /// Re-derives the submatrix, rank and bound from `m`.
    pub fn recheck(&self, m: &Matrix) -> bool {
        let sorted =
            |v: &[usize], n: usize| v.windows(2).all(|w| w[0] < w[1]) && v.iter().all(|&i| i < n);
        sorted(&self.x1, m.cols())
            && sorted(&self.y1, m.rows())
            && self.submatrix == m.submatrix(&self.y1, &self.x1)
            && self.rank == self.submatrix.rank()
            && self.bound == 3 * self.separator.len()
    }
}

fn list(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|i| format!("{}", i + 1)).collect();
    format!("{{{}}}", parts.join(","))
}

impl fmt::Display for RankCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rank certificate ({})", self.kind)?;
        writeln!(f, "measured:")?;
        writeln!(f, "  bilinearized size   {}", self.bilinear_size)?;
        if self.kind == PipelineKind::Planar {
            writeln!(f, "  X0                  {}", list(&self.x0))?;
            writeln!(f, "  Y0                  {}", list(&self.y0))?;
            writeln!(f, "  max reads k         {}", self.k)?;
            writeln!(f, "  labels              {}", self.labels)?;
        }
        if let Some(s) = self.strategy {
            writeln!(f, "  strategy            {s:?}")?;
        }
        writeln!(f, "  X1                  {}", list(&self.x1))?;
        writeln!(f, "  Y1                  {}", list(&self.y1))?;
        writeln!(f, "  separator size      {}", self.separator.len())?;
        writeln!(f, "  rank(M')            {}", self.rank)?;
        writeln!(
            f,
            "  split               {} checked, {} failures, {} straddling",
            self.split.checked,
            self.split.failures.len(),
            self.split.straddling
        )?;
        for c in &self.bilrank.classes {
            writeln!(
                f,
                "  bilrank {:<11} {} products, rank {}",
                format!("{:?}", c.class),
                c.products,
                c.rank
            )?;
        }
        writeln!(f, "guaranteed:")?;
        writeln!(f, "  rank(M') <= 3|separator| = {}", self.bound)?;
        writeln!(f, "  class ranks <= |separator| = {}", self.bilrank.bound)?;
        writeln!(f, "verdict: {}", self.verdict())
    }
}

/// Fan-in at most two, then bilinearize.
fn prepare(c: &Circuit, m: &Matrix, seed: u64) -> Result<Circuit, CertifyError> {
    c.check()?;
    if c.outputs.len() != 1 {
        return Err(CertifyError::Precondition(
            "a single output is required".into(),
        ));
    }
    if c.vars.x.len() != m.cols() || c.vars.y.len() != m.rows() {
        return Err(CertifyError::Mismatch(format!(
            "circuit has {} x and {} y variables, matrix is {}x{}",
            c.vars.x.len(),
            c.vars.y.len(),
            m.rows(),
            m.cols()
        )));
    }
    if c.field != *m.field() {
        return Err(CertifyError::Mismatch(
            "circuit and matrix fields differ".into(),
        ));
    }
    if !c
        .identity_test(&rebuild_bilinear(m), TRIALS, seed)?
        .is_equal()
    {
        return Err(CertifyError::Mismatch(
            "circuit does not compute the given form".into(),
        ));
    }
    let reduced;
    let mut c = c;
    if c.in_degrees().into_iter().any(|d| d > 2) {
        reduced = reduce_degree(c)?.0;
        c = &reduced;
    }
    Ok(bilinearize(c)?.0)
}

/// Zeroes every variable outside `x1`, `y1` and checks the result against
/// the zero-padded submatrix.
fn restrict(
    phi: &Circuit,
    m: &Matrix,
    x1: &[usize],
    y1: &[usize],
    seed: u64,
) -> Result<(Circuit, Matrix), CertifyError> {
    let f = &phi.field;
    let keep_x: BTreeSet<usize> = x1.iter().copied().collect();
    let keep_y: BTreeSet<usize> = y1.iter().copied().collect();
    let mut zeros: Vec<(Var, Scalar)> = Vec::new();
    zeros.extend(
        (0..m.cols())
            .filter(|i| !keep_x.contains(i))
            .map(|i| (Var::x(i), f.zero())),
    );
    zeros.extend(
        (0..m.rows())
            .filter(|j| !keep_y.contains(j))
            .map(|j| (Var::y(j), f.zero())),
    );
    let sub = substitute(phi, &zeros)?;
    let padded = Matrix::from_fn(f.clone(), m.rows(), m.cols(), |r, c| {
        if keep_y.contains(&r) && keep_x.contains(&c) {
            m.get(r, c).clone()
        } else {
            f.zero()
        }
    });
    if !sub
        .identity_test(&rebuild_bilinear(&padded), TRIALS, seed)?
        .is_equal()
    {
        return Err(CertifyError::Mismatch(
            "restricted circuit disagrees with the submatrix".into(),
        ));
    }
    Ok((sub, m.submatrix(y1, x1)))
}

/// Row-echelon basis, rows kept in insertion order with unit pivots.
struct Span {
    field: Field,
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Span {
    fn new(field: Field) -> Self {
        Span {
            field,
            rows: Vec::new(),
        }
    }

    fn reduce(&self, v: &mut [Scalar]) {
        let f = &self.field;
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = f.sub(x, &f.mul(&c, r));
                }
            }
        }
    }

    fn insert(&mut self, mut v: Vec<Scalar>) {
        self.reduce(&mut v);
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            let inv = self.field.inv(&v[p]).expect("nonzero pivot");
            for x in v.iter_mut() {
                *x = self.field.mul(x, &inv);
            }
            self.rows.push((p, v));
        }
    }

    fn contains(&self, v: &[Scalar]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(Scalar::is_zero)
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// Split and bilrank checks on the restricted circuit `sub`, whose gate
/// graph is `g`, against the separator `sep`.
fn analyse(
    sub: &Circuit,
    g: &UGraph,
    sep: &[usize],
    seed: u64,
) -> Result<(SplitReport, BilrankReport), CertifyError> {
    let f = &sub.field;
    let (nx, ny) = (sub.vars.x.len(), sub.vars.y.len());
    let parts = affine_parts(sub)?;
    // dense x and y parts of the linear part of `form * scale`
    let split = |gate: usize, scale: &Scalar| -> (Vec<Scalar>, Vec<Scalar>) {
        let mut xs = vec![f.zero(); nx];
        let mut ys = vec![f.zero(); ny];
        for (&slot, v) in &parts[gate].linear {
            let var = sub.vars.var_at(slot);
            let target = if var.kind == VarKind::X {
                &mut xs
            } else {
                &mut ys
            };
            target[var.index] = f.mul(v, scale);
        }
        (xs, ys)
    };
    let mut removed = vec![false; sub.size()];
    for &v in sep {
        removed[v] = true;
    }
    let (comp, count) = g.components_without(&removed);
    let mut has = vec![[false; 2]; count];
    for (v, k) in sub.gates.iter().enumerate() {
        if let (GateKind::Input(var), false) = (k, removed[v]) {
            has[comp[v]][usize::from(var.kind == VarKind::Y)] = true;
        }
    }
    let straddling = has.iter().filter(|h| h[0] && h[1]).count();
    let one = f.one();
    let mut x_span = Span::new(f.clone());
    let mut y_span = Span::new(f.clone());
    for &v in sep {
        let (xs, ys) = split(v, &one);
        x_span.insert(xs);
        y_span.insert(ys);
    }
    let adj = sub.adjacency();
    let mut g_rng = rng(seed);
    let mut combos: [Option<Matrix>; 3] = [None, None, None];
    let mut counts = [0usize; 3];
    let mut checked = 0;
    let mut failures = Vec::new();
    for (v, k) in sub.gates.iter().enumerate() {
        if *k != GateKind::Mul {
            continue;
        }
        let class = if removed[v] {
            ComponentClass::Separator
        } else if !has[comp[v]][1] {
            ComponentClass::YFree
        } else {
            ComponentClass::XFree
        };
        let operands: Vec<(Vec<Scalar>, Vec<Scalar>)> = adj.ins[v]
            .iter()
            .map(|&w| split(sub.wires[w].from, &sub.wires[w].scale))
            .collect();
        if class != ComponentClass::Separator {
            checked += 1;
            let ok = operands.iter().all(|(xs, ys)| match class {
                ComponentClass::YFree => y_span.contains(ys),
                _ => x_span.contains(xs),
            });
            if !ok {
                failures.push(v);
            }
        }
        if operands.len() != 2 {
            continue;
        }
        // bilinear part of a product of two affine forms, rows y
        let alpha = f.from_u64(g_rng.gen_range(1..=1000));
        let (a, b) = (&operands[0], &operands[1]);
        let term = Matrix::from_fn(f.clone(), ny, nx, |r, c| {
            let t = f.add(&f.mul(&a.1[r], &b.0[c]), &f.mul(&b.1[r], &a.0[c]));
            f.mul(&alpha, &t)
        });
        let slot = class as usize;
        counts[slot] += 1;
        combos[slot] = Some(match combos[slot].take() {
            None => term,
            Some(acc) => acc.add(&term).expect("same shape"),
        });
    }
    let classes = [
        ComponentClass::YFree,
        ComponentClass::XFree,
        ComponentClass::Separator,
    ]
    .into_iter()
    .map(|class| ClassRank {
        class,
        products: counts[class as usize],
        rank: combos[class as usize].as_ref().map_or(0, Matrix::rank),
    })
    .collect();
    Ok((
        SplitReport {
            y_span: y_span.dim(),
            x_span: x_span.dim(),
            checked,
            failures,
            straddling,
        },
        BilrankReport {
            classes,
            bound: sep.len(),
        },
    ))
}

/// Runs the planar pipeline: bilinearize, take the `⌈n/2⌉` least-read
/// variables on each side, find a labelled partition with `k` the largest
/// read count among them, zero everything outside the surviving sets and
/// compare `rank(M')` with `3 |V*|`.
pub fn rank_certificate_planar(
    c: &Circuit,
    m: &Matrix,
    seed: u64,
) -> Result<RankCertificate, CertifyError> {
    if !c.is_planar() {
        return Err(CertifyError::Precondition("circuit is not planar".into()));
    }
    let phi = prepare(c, m, seed)?;
    let (nx, ny) = (m.cols(), m.rows());
    let leaves = phi.leaves_by_slot();
    let reads = |v: Var| leaves[phi.vars.slot(v)].len();
    let low = |kind: VarKind, n: usize| -> Vec<usize> {
        let mut ids: Vec<usize> = (0..n).collect();
        ids.sort_by_key(|&i| (reads(Var { kind, index: i }), i));
        ids.truncate(n.div_ceil(2));
        ids.sort_unstable();
        ids
    };
    let (x0, y0) = (low(VarKind::X, nx), low(VarKind::Y, ny));
    let k = x0
        .iter()
        .map(|&i| reads(Var::x(i)))
        .chain(y0.iter().map(|&j| reads(Var::y(j))))
        .max()
        .unwrap_or(0)
        .max(1);
    let mut labels = vec![None; phi.size()];
    for &i in &x0 {
        for &g in &leaves[phi.vars.slot(Var::x(i))] {
            labels[g] = Some(Label::Left(i));
        }
    }
    for &j in &y0 {
        for &g in &leaves[phi.vars.slot(Var::y(j))] {
            labels[g] = Some(Label::Right(j));
        }
    }
    let g = circuit_graph(&phi).0;
    let part = turan_partition(&g, &labels, k)?;
    let (sub, submatrix) = restrict(&phi, m, &part.z0, &part.z0p, seed)?;
    let (split, bilrank) = analyse(&sub, &g, &part.removed, seed)?;
    let rank = submatrix.rank();
    Ok(RankCertificate {
        kind: PipelineKind::Planar,
        bilinear_size: phi.size(),
        x0,
        y0,
        k,
        x1: part.z0,
        y1: part.z0p,
        bound: 3 * part.removed.len(),
        separator: part.removed,
        strategy: Some(part.strategy),
        labels: labels.iter().flatten().count(),
        submatrix,
        rank,
        split,
        bilrank,
    })
}

/// Runs the read-once pipeline: bilinearize, weigh every variable leaf
/// equally, take a planar separator `(A, B, C)`, keep x-variables read in one
/// side and y-variables read in the other (orientation maximizing the
/// smaller count, both truncated to equal size), zero the rest and compare
/// `rank(M')` with `3 |C|`.
pub fn rank_certificate_read_once(
    c: &Circuit,
    m: &Matrix,
    seed: u64,
) -> Result<RankCertificate, CertifyError> {
    if !c.is_read_once() {
        return Err(CertifyError::Precondition(
            "circuit is not read-once".into(),
        ));
    }
    if !c.is_planar() {
        return Err(CertifyError::Precondition("circuit is not planar".into()));
    }
    let phi = prepare(c, m, seed)?;
    let g = circuit_graph(&phi).0;
    let leaf_count = phi
        .gates
        .iter()
        .filter(|k| matches!(k, GateKind::Input(_)))
        .count()
        .max(1);
    let unit = BigRational::new(BigInt::from(1), BigInt::from(leaf_count));
    let zero = BigRational::from_integer(BigInt::from(0));
    let w: Vec<BigRational> = phi
        .gates
        .iter()
        .map(|k| {
            if matches!(k, GateKind::Input(_)) {
                unit.clone()
            } else {
                zero.clone()
            }
        })
        .collect();
    let sep = lipton_tarjan(&g, &w)?;
    let mut side = vec![2u8; phi.size()];
    for &v in &sep.a {
        side[v] = 0;
    }
    for &v in &sep.b {
        side[v] = 1;
    }
    let read_in = |kind: VarKind, s: u8| -> Vec<usize> {
        let mut ids: BTreeSet<usize> = BTreeSet::new();
        for (v, k) in phi.gates.iter().enumerate() {
            if let GateKind::Input(var) = k {
                if var.kind == kind && side[v] == s {
                    ids.insert(var.index);
                }
            }
        }
        // a variable also read elsewhere cannot survive
        for (v, k) in phi.gates.iter().enumerate() {
            if let GateKind::Input(var) = k {
                if var.kind == kind && side[v] != s {
                    ids.remove(&var.index);
                }
            }
        }
        ids.into_iter().collect()
    };
    let (xa, yb) = (read_in(VarKind::X, 0), read_in(VarKind::Y, 1));
    let (xb, ya) = (read_in(VarKind::X, 1), read_in(VarKind::Y, 0));
    let (mut x1, mut y1) = if xb.len().min(ya.len()) > xa.len().min(yb.len()) {
        (xb, ya)
    } else {
        (xa, yb)
    };
    let t = x1.len().min(y1.len());
    x1.truncate(t);
    y1.truncate(t);
    let (sub, submatrix) = restrict(&phi, m, &x1, &y1, seed)?;
    let (split, bilrank) = analyse(&sub, &g, &sep.c, seed)?;
    let rank = submatrix.rank();
    Ok(RankCertificate {
        kind: PipelineKind::ReadOnce,
        bilinear_size: phi.size(),
        x0: Vec::new(),
        y0: Vec::new(),
        k: 1,
        x1,
        y1,
        bound: 3 * sep.c.len(),
        separator: sep.c,
        strategy: None,
        labels: leaf_count,
        submatrix,
        rank,
        split,
        bilrank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{grid_bilinear_circuit, standard_cauchy};

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn single_product_is_rank_one() {
        let f = q();
        let mut c = Circuit::new(f.clone(), 2, 2, 0);
        let x: Vec<_> = (0..2).map(|i| c.input(Var::x(i))).collect();
        let y: Vec<_> = (0..2).map(|i| c.input(Var::y(i))).collect();
        let l = c.add_scaled(&[(x[0], f.from_i64(2)), (x[1], f.one())]);
        let r = c.add(&[y[0], y[1]]);
        let p = c.mul(&[l, r]);
        c.output(p);
        let m = c.extract_bilinear_matrix().unwrap();
        for cert in [
            rank_certificate_planar(&c, &m, 1).unwrap(),
            rank_certificate_read_once(&c, &m, 1).unwrap(),
        ] {
            assert!(cert.rank <= 1);
            assert_eq!(cert.verdict(), Verdict::Consistent);
            assert!(cert.recheck(&m));
            assert!(cert.split.holds() && cert.bilrank.holds());
        }
    }

    #[test]
    fn one_by_one_form() {
        let f = q();
        let mut c = Circuit::new(f.clone(), 1, 1, 0);
        let (x, y) = (c.input(Var::x(0)), c.input(Var::y(0)));
        let p = c.mul(&[x, y]);
        c.output(p);
        let m = Matrix::identity(f, 1);
        let cert = rank_certificate_read_once(&c, &m, 0).unwrap();
        assert_eq!(cert.verdict(), Verdict::Consistent);
    }

    #[test]
    fn cauchy_grid_both_pipelines() {
        let m = standard_cauchy(&q(), 4).unwrap();
        let c = grid_bilinear_circuit(&m);
        for cert in [
            rank_certificate_planar(&c, &m, 3).unwrap(),
            rank_certificate_read_once(&c, &m, 3).unwrap(),
        ] {
            assert_eq!(cert.verdict(), Verdict::Consistent, "{cert}");
            assert!(cert.recheck(&m));
            assert!(cert.split.holds() && cert.bilrank.holds(), "{cert}");
        }
    }

    #[test]
    fn wrong_matrix_is_rejected() {
        let m = standard_cauchy(&q(), 3).unwrap();
        let c = grid_bilinear_circuit(&m);
        let other = Matrix::identity(q(), 3);
        assert!(matches!(
            rank_certificate_planar(&c, &other, 0),
            Err(CertifyError::Mismatch(_))
        ));
    }

    #[test]
    fn span_membership() {
        let f = q();
        let v = |a: &[i64]| a.iter().map(|&x| f.from_i64(x)).collect::<Vec<_>>();
        let mut s = Span::new(f.clone());
        s.insert(v(&[1, 2, 0]));
        s.insert(v(&[0, 1, 1]));
        s.insert(v(&[1, 3, 1]));
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&v(&[2, 5, 1])));
        assert!(!s.contains(&v(&[0, 0, 1])));
    }
}
