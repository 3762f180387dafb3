use num_bigint::BigInt;
use num_rational::BigRational;
use pac_core::certify::{
    max_disjoint_paths, multi_output_certificate, paper_bound, path_claim, rank_certificate_planar,
    rank_certificate_read_once, BoundModel, MultiOutputModel, PipelineKind, Verdict,
};
use pac_core::circuit::{Circuit, GateKind, Var};
use pac_core::constructions::{
    assign_strassen_weights, grid_bilinear_circuit, power_sum_circuit, random_planar_bilinear,
    sc_complete, standard_cauchy, StrassenConfig,
};
use pac_core::scalar::{Field, Matrix};
use proptest::prelude::*;

fn q() -> Field {
    Field::Rationals
}

#[test]
fn cauchy_certificates() {
    for n in [8, 16] {
        let m = standard_cauchy(&q(), n).unwrap();
        let c = grid_bilinear_circuit(&m);
        let planar = rank_certificate_planar(&c, &m, 7).unwrap();
        assert_eq!(planar.kind, PipelineKind::Planar);
        let ro = rank_certificate_read_once(&c, &m, 7).unwrap();
        for cert in [planar, ro] {
            assert_eq!(cert.verdict(), Verdict::Consistent, "{cert}");
            assert!(cert.recheck(&m));
            assert!(cert.split.holds() && cert.bilrank.holds(), "{cert}");
            assert_eq!(cert.x1.len(), cert.y1.len());
        }
    }
}

#[test]
fn planar_pipeline_on_read_once_cauchy_meets_partition_bounds() {
    let n = 8;
    let m = standard_cauchy(&q(), n).unwrap();
    let cert = rank_certificate_planar(&grid_bilinear_circuit(&m), &m, 1).unwrap();
    assert_eq!(cert.k, 1);
    // s = |X0| = n/2 labels a side, |Z0| >= s/9
    assert!(9 * cert.x1.len() >= n / 2);
    assert!((cert.separator.len() as u128).pow(2) <= 450u128.pow(2) * cert.bilinear_size as u128);
}

#[test]
fn read_once_pipeline_rejects_repeated_reads() {
    let f = q();
    let mut c = Circuit::new(f.clone(), 1, 1, 0);
    let (x, x2, y) = (c.input(Var::x(0)), c.input(Var::x(0)), c.input(Var::y(0)));
    let s = c.add(&[x, x2]);
    let p = c.mul(&[s, y]);
    c.output(p);
    let m = Matrix::from_fn(f.clone(), 1, 1, |_, _| f.from_i64(2));
    assert!(rank_certificate_read_once(&c, &m, 0).is_err());
    assert_eq!(
        rank_certificate_planar(&c, &m, 0).unwrap().verdict(),
        Verdict::Consistent
    );
}

/// Smallest vertex set meeting every source-to-sink path, by enumeration.
fn brute_min_cut(n: usize, arcs: &[(usize, usize)], sources: &[usize], sinks: &[usize]) -> usize {
    let reaches = |blocked: u32| {
        let mut seen = 0u32;
        let mut stack: Vec<usize> = sources
            .iter()
            .copied()
            .filter(|&s| blocked >> s & 1 == 0)
            .collect();
        for &s in &stack {
            seen |= 1 << s;
        }
        while let Some(v) = stack.pop() {
            for &(a, b) in arcs {
                if a == v && blocked >> b & 1 == 0 && seen >> b & 1 == 0 {
                    seen |= 1 << b;
                    stack.push(b);
                }
            }
        }
        sinks.iter().any(|&t| seen >> t & 1 == 1)
    };
    (0u32..1 << n)
        .filter(|&b| !reaches(b))
        .map(|b| b.count_ones() as usize)
        .min()
        .unwrap()
}

fn random_dag(seed: u64) -> (usize, Vec<(usize, usize)>, Vec<usize>, Vec<usize>) {
    let mut state = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) | 1;
    let mut next = |m: usize| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % m as u64) as usize
    };
    let n = 4 + next(9);
    let mut arcs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if next(100) < 35 {
                arcs.push((a, b));
            }
        }
    }
    let k = 1 + next(3);
    let sources: Vec<usize> = (0..k).map(|_| next(n / 2)).collect();
    let sinks: Vec<usize> = (0..k).map(|_| n / 2 + next(n - n / 2)).collect();
    (n, arcs, sources, sinks)
}

#[test]
fn menger_duality_on_random_dags() {
    for seed in 0..100 {
        let (n, arcs, sources, sinks) = random_dag(seed);
        let r = max_disjoint_paths(n, &arcs, &sources, &sinks);
        assert!(r.verify(n, &arcs), "seed {seed}: {r:?}");
        assert_eq!(
            r.count,
            brute_min_cut(n, &arcs, &sources, &sinks),
            "seed {seed}"
        );
    }
}

#[test]
fn power_sum_has_one_path() {
    let c = power_sum_circuit(8).unwrap();
    let arcs: Vec<(usize, usize)> = c.wires.iter().map(|w| (w.from, w.to)).collect();
    let leaves: Vec<usize> = (0..c.size())
        .filter(|&g| matches!(c.gates[g], GateKind::Input(_)))
        .collect();
    assert_eq!(leaves.len(), 8);
    let r = max_disjoint_paths(c.size(), &arcs, &leaves, &c.outputs);
    assert_eq!(r.count, 1);
    assert!(r.verify(c.size(), &arcs));
}

#[test]
fn strassen_circuit_multi_output() {
    let g = sc_complete(4);
    let w = assign_strassen_weights(&g, &q(), 4, &StrassenConfig::default()).unwrap();
    let claim = path_claim(&w.circuit, 4, 1 << 12, 0);
    assert!(claim.exhaustive && claim.failures.is_empty());
    assert_eq!(claim.tested, 16 + 36 + 16 + 1);
    let r = multi_output_certificate(&w.circuit, &w.matrix, 2, 3).unwrap();
    assert_eq!(r.regular, Some(true));
    assert!(r.consistent(), "{r:?}");
}

/// One disjoint formula per row of `m`.
fn row_formulas(m: &Matrix) -> Circuit {
    let f = m.field().clone();
    let mut c = Circuit::new(f, m.cols(), 0, 0);
    for r in 0..m.rows() {
        let terms: Vec<_> = (0..m.cols())
            .map(|j| (c.input(Var::x(j)), m.get(r, j).clone()))
            .collect();
        let mut acc = c.add_scaled(&terms[..1]);
        for t in &terms[1..] {
            acc = c.add_scaled(&[(acc, q().one()), t.clone()]);
        }
        c.output(acc);
    }
    c
}

#[test]
fn formula_multi_output() {
    let m = standard_cauchy(&q(), 6).unwrap();
    let c = row_formulas(&m);
    assert!(c.is_formula());
    for p in [1, 2, 3, 6] {
        let r = multi_output_certificate(&c, &m, p, 0).unwrap();
        assert_eq!(r.model, MultiOutputModel::Formula);
        assert_eq!(r.parts.len(), p);
        assert!(r.consistent(), "{r:?}");
    }
    assert!(multi_output_certificate(&c, &Matrix::identity(q(), 6), 2, 0).is_err());
}

#[test]
fn bound_table() {
    let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let t = paper_bound(BoundModel::PlanarCircuit, 1024).unwrap();
    assert_eq!(t.value, r(1024 * 10, 60000));
    assert!(t.note.contains("disagree"));
    assert_eq!(
        paper_bound(BoundModel::ReadOncePlanar, 130).unwrap().value,
        r(10, 1)
    );
    assert!(
        paper_bound(BoundModel::MultiOutputPlanar, 27)
            .unwrap()
            .asymptotic_only
    );
    assert_eq!(
        paper_bound(BoundModel::MultiOutputPlanar, 27)
            .unwrap()
            .value,
        r(81, 1)
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_planar_bilinear_certificates(nx in 1usize..9, ny in 1usize..9, seed: u64) {
        let (c, m) = random_planar_bilinear(&q(), nx, ny, seed);
        prop_assert!(c.is_planar());
        let cert = rank_certificate_planar(&c, &m, seed).unwrap();
        prop_assert_eq!(cert.verdict(), Verdict::Consistent);
        prop_assert!(cert.recheck(&m));
        prop_assert!(cert.split.holds() && cert.bilrank.holds());
        if c.is_read_once() {
            let ro = rank_certificate_read_once(&c, &m, seed).unwrap();
            prop_assert_eq!(ro.verdict(), Verdict::Consistent);
            prop_assert!(ro.split.holds() && ro.bilrank.holds());
        }
    }

    #[test]
    fn disjoint_paths_verify(seed: u64) {
        let (n, arcs, sources, sinks) = random_dag(seed);
        let r = max_disjoint_paths(n, &arcs, &sources, &sinks);
        prop_assert!(r.verify(n, &arcs));
    }
}
