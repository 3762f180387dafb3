use num_bigint::BigInt;
use pac_core::circuit::{Assignment, Var};
use pac_core::constructions::{
    abp_from_superconcentrator, assign_strassen_weights, benor_circuit,
    bilinear_formula_from_depth2, cauchy_matrix, power_sum_bound, power_sum_circuit, sc_complete,
    sc_depth2, sc_recursive, standard_cauchy, verify_superconcentrator, ConstructionError,
    ScVerdict, StrassenConfig,
};
use pac_core::scalar::{Field, Matrix, TotalRegularity};
use pac_core::transforms::{abp_to_circuit, substitute};
use proptest::prelude::*;

fn q() -> Field {
    Field::Rationals
}

fn frac(n: i64, d: i64) -> pac_core::Scalar {
    q().from_ratio(&BigInt::from(n), &BigInt::from(d)).unwrap()
}

#[test]
fn cauchy_examples() {
    let f = q();
    let m = cauchy_matrix(&f, &[f.from_i64(0)], &[f.from_i64(1)]).unwrap();
    assert_eq!(m.get(0, 0), &f.from_i64(-1));
    let xs = [f.from_i64(1), f.from_i64(2)];
    let m = cauchy_matrix(&f, &xs, &[f.from_i64(3), f.from_i64(4)]).unwrap();
    assert_eq!(
        m.entries(),
        &[frac(-1, 2), frac(-1, 3), frac(-1, 1), frac(-1, 2)]
    );
    assert_eq!(m.determinant().unwrap(), frac(-1, 12));
    assert_eq!(
        cauchy_matrix(&f, &xs, &[f.from_i64(2), f.from_i64(3)]),
        Err(ConstructionError::RepeatedParameter(1, 2))
    );
}

#[test]
fn cauchy_is_totally_regular() {
    for n in 1..=6 {
        let m = standard_cauchy(&q(), n).unwrap();
        assert_eq!(
            m.is_totally_regular(1 << 20, 0).unwrap(),
            TotalRegularity::Yes
        );
    }
}

#[test]
fn power_sum_values() {
    let f = q();
    let c = power_sum_circuit(4).unwrap();
    let x: Vec<_> = (1..=4).map(|v| f.from_i64(v)).collect();
    assert_eq!(
        c.evaluate(&Assignment::new(x, vec![], vec![])).unwrap(),
        vec![f.from_i64(354)]
    );
    let c = power_sum_circuit(5).unwrap();
    let x = vec![f.from_i64(2), f.zero(), f.zero(), f.zero(), f.zero()];
    assert_eq!(
        c.evaluate(&Assignment::new(x, vec![], vec![])).unwrap(),
        vec![f.from_i64(32)]
    );
    assert!(power_sum_circuit(0).is_err());
}

#[test]
fn power_sum_shape() {
    for n in [1, 2, 3, 7, 16, 33, 100] {
        let c = power_sum_circuit(n).unwrap();
        assert!(c.is_read_once() && c.is_planar());
        assert!(c.size() <= power_sum_bound(n));
    }
}

#[test]
fn recursive_superconcentrator_exhaustive() {
    assert_eq!(
        verify_superconcentrator(&sc_recursive(8), 1 << 20, 0),
        ScVerdict::Yes
    );
    for n in 1..=5 {
        assert_eq!(
            verify_superconcentrator(&sc_complete(n), 1 << 20, 0),
            ScVerdict::Yes
        );
    }
}

#[test]
fn strassen_weights_on_complete_graphs() {
    for n in [2, 4, 6] {
        let w =
            assign_strassen_weights(&sc_complete(n), &q(), n as u64, &StrassenConfig::default())
                .unwrap();
        assert!(w.attempts <= 3);
        assert_eq!(
            w.matrix.is_totally_regular(1 << 20, 1).unwrap(),
            TotalRegularity::Yes
        );
    }
}

#[test]
fn strassen_over_a_prime_field() {
    let f = Field::prime_u64(1_000_003).unwrap();
    let w = assign_strassen_weights(&sc_recursive(4), &f, 3, &StrassenConfig::default()).unwrap();
    assert_eq!(w.matrix.rows(), 4);
}

#[test]
fn abp_from_weighted_superconcentrator() {
    let f = q();
    for g in [sc_complete(1), sc_complete(2), sc_recursive(4)] {
        let w = assign_strassen_weights(&g, &f, 11, &StrassenConfig::default()).unwrap();
        let p = abp_from_superconcentrator(&g, &f, &w.weights).unwrap();
        assert_eq!(p.vertices, g.vertices + 2);
        let c = abp_to_circuit(&p).unwrap().0;
        let m = c.extract_bilinear_matrix().unwrap();
        assert_eq!(m, w.matrix);
    }
}

#[test]
fn benor_pipeline() {
    let f = q();
    for n in [2, 4] {
        let g = sc_depth2(n, n);
        let w = assign_strassen_weights(&g, &f, 5, &StrassenConfig::default()).unwrap();
        let c = benor_circuit(&g, &f).unwrap();
        let poly = c.expand(1 << 16).unwrap();
        assert_eq!(poly[0].degree(), Some(4));
        let alpha: Vec<(Var, _)> = w
            .weights
            .iter()
            .enumerate()
            .map(|(e, a)| (Var::z(e), a.clone()))
            .collect();
        let projected = substitute(&c, &alpha).unwrap();
        let m = projected.extract_bilinear_matrix().unwrap();
        assert_eq!(m, w.matrix);
        assert_eq!(
            m.is_totally_regular(1 << 20, 0).unwrap(),
            TotalRegularity::Yes
        );
    }
}

#[test]
fn benor_with_unit_weights_is_all_ones() {
    let f = q();
    let g = sc_depth2(2, 2);
    let c = benor_circuit(&g, &f).unwrap();
    let ones: Vec<(Var, _)> = (0..g.edges.len()).map(|e| (Var::z(e), f.one())).collect();
    let m = substitute(&c, &ones)
        .unwrap()
        .extract_bilinear_matrix()
        .unwrap();
    assert_eq!(m, Matrix::from_fn(f.clone(), 2, 2, |_, _| f.from_i64(2)));
}

#[test]
fn formula_reconstructs_the_matrix() {
    let f = q();
    let g = sc_depth2(2, 2);
    let w = assign_strassen_weights(&g, &f, 9, &StrassenConfig::default()).unwrap();
    let formula = bilinear_formula_from_depth2(&g, &f, &w.weights).unwrap();
    assert_eq!(formula.matrix(), w.matrix);
    assert!(formula.size() <= g.edges.len());
    let c = formula.to_circuit();
    assert_eq!(c.extract_bilinear_matrix().unwrap(), w.matrix);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn power_sum_matches_direct_sum(n in 1usize..80, seed: u64) {
        let f = q();
        let c = power_sum_circuit(n).unwrap();
        let x: Vec<_> = (0..n).map(|i| f.from_i64(((seed >> (i % 60)) & 7) as i64 - 3)).collect();
        let expect = x.iter().fold(f.zero(), |acc, v| f.add(&acc, &f.pow(v, n as u64)));
        prop_assert_eq!(c.evaluate(&Assignment::new(x, vec![], vec![])).unwrap(), vec![expect]);
    }

    #[test]
    fn formula_size_bounded_by_edges(n in 1usize..5, k in 1usize..5, seed: u64) {
        let f = q();
        let g = sc_depth2(n, k);
        let w: Vec<_> = (0..g.edges.len()).map(|e| f.from_u64((seed.rotate_left(e as u32) % 5) + 1)).collect();
        let formula = bilinear_formula_from_depth2(&g, &f, &w).unwrap();
        prop_assert!(formula.size() <= g.edges.len());
        let c = formula.to_circuit();
        prop_assert_eq!(c.extract_bilinear_matrix().unwrap(), formula.matrix());
    }
}
