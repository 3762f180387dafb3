use pac_core::circuit::{Abp, Assignment, CircuitError, EdgeLabel, ModEval, VarSet, DEFAULT_PRIME};
use pac_core::constructions::{
    grid_bilinear_circuit, power_sum_circuit, random_abp, random_circuit, random_planar_abp,
    standard_cauchy,
};
use pac_core::transforms::{
    abp_to_circuit, bilinearize, crossover_gadget, derivative_circuit, planarize, reduce_degree,
    substitute,
};
use pac_core::{Circuit, Field, GateKind, Matrix, Var};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const Q: u64 = DEFAULT_PRIME;

fn q() -> Field {
    Field::Rationals
}

fn mulq(a: u64, b: u64) -> u64 {
    (a as u128 * b as u128 % Q as u128) as u64
}

fn addq(a: u64, b: u64) -> u64 {
    ((a as u128 + b as u128) % Q as u128) as u64
}

/// Forward-mode dual numbers mod Q: value and derivative along `x_dir`.
fn dual_eval(c: &Circuit, point: &[u64], x_dir: usize) -> (u64, u64) {
    let order = c.topo_order().unwrap();
    let mut ins = vec![Vec::new(); c.size()];
    for w in &c.wires {
        ins[w.to].push(w);
    }
    let mut val = vec![(0u64, 0u64); c.size()];
    for &g in &order {
        val[g] = match &c.gates[g] {
            GateKind::Input(v) => (point[c.vars.slot(*v)], u64::from(*v == Var::x(x_dir))),
            GateKind::Const(s) => (c.field.residue_mod(s, Q).unwrap(), 0),
            GateKind::Add => ins[g].iter().fold((0, 0), |(a, da), w| {
                let k = c.field.residue_mod(&w.scale, Q).unwrap();
                let (b, db) = val[w.from];
                (addq(a, mulq(k, b)), addq(da, mulq(k, db)))
            }),
            GateKind::Mul => ins[g].iter().fold((1, 0), |(a, da), w| {
                let k = c.field.residue_mod(&w.scale, Q).unwrap();
                let (b, db) = (mulq(k, val[w.from].0), mulq(k, val[w.from].1));
                (mulq(a, b), addq(mulq(da, b), mulq(a, db)))
            }),
        };
    }
    val[c.outputs[0]]
}

fn random_point(slots: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    (0..slots).map(|_| rng.gen_range(0..Q)).collect()
}

fn check_derivatives(c: &Circuit, d: &Circuit, trials: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ev = ModEval::new(d, Q).unwrap();
    for _ in 0..trials {
        let p = random_point(c.vars.total(), &mut rng);
        let got = ev.eval(&p);
        assert_eq!(got.len(), c.vars.x.len());
        for (i, &g) in got.iter().enumerate() {
            assert_eq!(g, dual_eval(c, &p, i).1, "d/dx{}", i + 1);
        }
    }
}

/// Planar circuit on a grid with diagonals: gate (i, j) reads its left,
/// upper and upper-left neighbours, so inner gates have fan-in and fan-out 3.
fn planar_grid_circuit(rows: usize, cols: usize, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(q(), rows + cols, 0, 0);
    let mut id = vec![vec![0; cols]; rows];
    for i in 0..rows {
        for j in 0..cols {
            id[i][j] = if i == 0 || j == 0 {
                c.input(Var::x(if i == 0 { j } else { cols + i }))
            } else {
                let kind = if rng.gen_bool(0.3) {
                    GateKind::Mul
                } else {
                    GateKind::Add
                };
                let g = c.add_gate(kind);
                for (a, b) in [(i - 1, j), (i, j - 1), (i - 1, j - 1)] {
                    let s = q().from_i64(rng.gen_range(1..4));
                    c.wire(id[a][b], g, s);
                }
                g
            };
        }
    }
    c.output(id[rows - 1][cols - 1]);
    c
}

fn k33_circuit() -> Circuit {
    let mut c = Circuit::new(q(), 3, 0, 0);
    let xs: Vec<usize> = (0..3).map(|i| c.input(Var::x(i))).collect();
    let adds: Vec<usize> = (0..3).map(|_| c.add(&xs)).collect();
    let m = c.mul(&adds[..2]);
    let out = c.add(&[m, adds[2]]);
    c.output(out);
    c
}

fn bilinear_pair() -> Circuit {
    // x1 y1 + x2 y2 = (x1 + x2)(y1 + y2) - x1 y2 - x2 y1
    let mut c = Circuit::new(q(), 2, 2, 0);
    let (x1, x2) = (c.input(Var::x(0)), c.input(Var::x(1)));
    let (y1, y2) = (c.input(Var::y(0)), c.input(Var::y(1)));
    let sx = c.add(&[x1, x2]);
    let sy = c.add(&[y1, y2]);
    let p = c.mul(&[sx, sy]);
    let a = c.mul(&[x1, y2]);
    let b = c.mul(&[x2, y1]);
    let m1 = q().from_i64(-1);
    let out = c.add_scaled(&[(p, q().one()), (a, m1.clone()), (b, m1)]);
    c.output(out);
    c
}

#[test]
fn fan_in_four_becomes_binary_tree() {
    let mut c = Circuit::new(q(), 4, 0, 0);
    let xs: Vec<usize> = (0..4).map(|i| c.input(Var::x(i))).collect();
    let s = c.add(&xs);
    c.output(s);
    let (r, rep) = reduce_degree(&c).unwrap();
    let adds = r
        .gates
        .iter()
        .filter(|g| matches!(g, GateKind::Add))
        .count();
    assert_eq!(adds, 3);
    assert!(r.has_degree_at_most_two());
    assert!(r.identity_test(&c, 20, 1).unwrap().is_equal());
    assert!(rep.satisfied());
}

#[test]
fn low_degree_circuit_is_unchanged() {
    let c = random_circuit(&q(), 4, 40, 2, 3);
    let c = reduce_degree(&c).unwrap().0;
    let (r, rep) = reduce_degree(&c).unwrap();
    assert_eq!(r, c);
    assert_eq!(rep.output_size, rep.input_size);
}

#[test]
fn random_fifty_gate_circuit_reduces_within_seven_fold() {
    let c = random_circuit(&q(), 6, 50, 7, 11);
    let (r, rep) = reduce_degree(&c).unwrap();
    assert!(r.size() <= 350, "{}", r.size());
    assert!(rep.satisfied());
    assert!(r.has_degree_at_most_two());
    assert!(r.identity_test(&c, 20, 2).unwrap().is_equal());
}

#[test]
fn reduce_degree_keeps_grid_planar() {
    for seed in 0..10 {
        let c = planar_grid_circuit(4 + seed as usize % 3, 5, seed);
        assert!(c.is_planar());
        let (r, rep) = reduce_degree(&c).unwrap();
        assert!(r.is_planar(), "seed {seed}");
        assert!(r.has_degree_at_most_two());
        assert!(rep.satisfied());
        assert!(r.identity_test(&c, 20, seed).unwrap().is_equal());
    }
}

#[test]
fn gadget_swaps_its_inputs() {
    let g = crossover_gadget(q());
    let at =
        |a: i64, b: i64| Assignment::new(vec![q().from_i64(a), q().from_i64(b)], vec![], vec![]);
    assert_eq!(
        g.evaluate(&at(2, 5)).unwrap(),
        vec![q().from_i64(5), q().from_i64(2)]
    );
    assert_eq!(g.evaluate(&at(0, 0)).unwrap(), vec![q().zero(), q().zero()]);
    assert!(g.is_planar());
    assert_eq!(
        g.gates
            .iter()
            .filter(|k| matches!(k, GateKind::Add))
            .count(),
        3
    );
}

#[test]
fn gadget_swaps_symbolic_inputs() {
    // feed (x1, y1 y2) and read back (y1 y2, x1) at random points
    let g = crossover_gadget(q());
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let ev = ModEval::new(&g, Q).unwrap();
    for _ in 0..20 {
        let (x1, y1, y2) = (
            rng.gen_range(0..Q),
            rng.gen_range(0..Q),
            rng.gen_range(0..Q),
        );
        let b = mulq(y1, y2);
        assert_eq!(ev.eval(&[x1, b]), vec![b, x1]);
    }
}

#[test]
fn planar_input_gets_no_gadgets() {
    let m = standard_cauchy(&q(), 4).unwrap();
    let c = grid_bilinear_circuit(&m);
    let (p, rep) = planarize(&c, 1).unwrap();
    assert_eq!(rep.gadgets, 0);
    assert_eq!(p, c);
}

#[test]
fn k33_circuit_needs_a_gadget() {
    let c = reduce_degree(&k33_circuit()).unwrap().0;
    let (p, rep) = planarize(&c, 5).unwrap();
    assert!(rep.gadgets >= 1);
    assert!(p.is_planar());
    assert!(p.identity_test(&c, 20, 5).unwrap().is_equal());
    let (_, again) = planarize(&p, 6).unwrap();
    assert_eq!(again.gadgets, 0);
}

#[test]
fn planarize_rejects_wide_fan_in() {
    assert!(matches!(
        planarize(&k33_circuit(), 1),
        Err(CircuitError::Precondition(_))
    ));
}

#[test]
fn random_thirty_gate_circuit_planarizes_within_bound() {
    let c = random_circuit(&q(), 5, 30, 2, 30);
    let (p, rep) = planarize(&c, 30).unwrap();
    assert!(p.is_planar());
    assert!(p.size() <= 30 + 3 * (60 * 59 / 2));
    assert!(rep.satisfied());
    assert!(p.identity_test(&c, 20, 30).unwrap().is_equal());
}

#[test]
fn bilinearize_single_product() {
    let mut c = Circuit::new(q(), 1, 1, 0);
    let (x, y) = (c.input(Var::x(0)), c.input(Var::y(0)));
    let m = c.mul(&[x, y]);
    c.output(m);
    let (b, rep) = bilinearize(&c).unwrap();
    assert_eq!(
        b.extract_bilinear_matrix().unwrap(),
        Matrix::identity(q(), 1)
    );
    assert!(b.is_bilinear_shape().unwrap());
    assert!(rep.satisfied());
}

#[test]
fn bilinearize_shared_adds_gives_identity() {
    let c = reduce_degree(&bilinear_pair()).unwrap().0;
    let c = planarize(&c, 2).unwrap().0;
    assert!(c.is_planar());
    let (b, _) = bilinearize(&c).unwrap();
    assert!(b.is_planar());
    assert!(b.is_bilinear_shape().unwrap());
    assert_eq!(
        b.extract_bilinear_matrix().unwrap(),
        Matrix::identity(q(), 2)
    );
}

#[test]
fn bilinearize_rejects_non_bilinear() {
    let mut c = Circuit::new(q(), 2, 2, 0);
    let (x1, y1) = (c.input(Var::x(0)), c.input(Var::y(0)));
    let (x2, y2) = (c.input(Var::x(1)), c.input(Var::y(1)));
    let a = c.add(&[x1, y1]);
    let b = c.add(&[x2, y2]);
    let m = c.mul(&[a, b]);
    c.output(m);
    assert!(matches!(bilinearize(&c), Err(CircuitError::NotBilinear)));
}

#[test]
fn bilinearize_handles_constants_and_squares() {
    // (x1 + 2)(y1 + 3) - 3 x1 - 2 y1 - 6 = x1 y1, built with constants
    let mut c = Circuit::new(q(), 1, 1, 0);
    let (x, y) = (c.input(Var::x(0)), c.input(Var::y(0)));
    let (two, three) = (c.constant(q().from_i64(2)), c.constant(q().from_i64(3)));
    let a = c.add(&[x, two]);
    let b = c.add(&[y, three]);
    let p = c.mul(&[a, b]);
    let k = c.constant(q().from_i64(-6));
    let out = c.add_scaled(&[
        (p, q().one()),
        (x, q().from_i64(-3)),
        (y, q().from_i64(-2)),
        (k, q().one()),
    ]);
    c.output(out);
    let c = reduce_degree(&c).unwrap().0;
    let (b, _) = bilinearize(&c).unwrap();
    assert!(b.is_planar());
    assert!(b.is_bilinear_shape().unwrap());
    assert_eq!(
        b.extract_bilinear_matrix().unwrap(),
        Matrix::identity(q(), 1)
    );
}

#[test]
fn bilinearize_cauchy_grid() {
    let m = standard_cauchy(&q(), 5).unwrap();
    let c = grid_bilinear_circuit(&m);
    let (b, rep) = bilinearize(&c).unwrap();
    assert!(b.is_planar());
    assert!(b.is_bilinear_shape().unwrap());
    assert_eq!(b.extract_bilinear_matrix().unwrap(), m);
    assert!(rep.satisfied());
}

#[test]
fn abp_single_edge() {
    let mut p = Abp::new(q(), VarSet::with_counts(1, 0, 0), 2, 0, 1);
    p.edge(0, 1, EdgeLabel::Var(Var::x(0)));
    let (c, rep) = abp_to_circuit(&p).unwrap();
    assert!(p.identity_test_circuit(&c, 20, 1).unwrap().is_equal());
    assert!(rep.satisfied());
}

#[test]
fn abp_diamond() {
    let mut p = Abp::new(q(), VarSet::with_counts(4, 0, 0), 4, 0, 3);
    p.edge(0, 1, EdgeLabel::Var(Var::x(0)));
    p.edge(1, 3, EdgeLabel::Var(Var::x(1)));
    p.edge(0, 2, EdgeLabel::Var(Var::x(2)));
    p.edge(2, 3, EdgeLabel::Var(Var::x(3)));
    let (c, _) = abp_to_circuit(&p).unwrap();
    let at = Assignment::new((1..=4).map(|v| q().from_i64(v)).collect(), vec![], vec![]);
    assert_eq!(c.evaluate(&at).unwrap(), vec![q().from_i64(14)]);
    assert!(c.is_planar());
}

#[test]
fn abp_without_path_is_zero() {
    let mut p = Abp::new(q(), VarSet::with_counts(1, 0, 0), 3, 0, 2);
    p.edge(0, 1, EdgeLabel::Var(Var::x(0)));
    let (c, _) = abp_to_circuit(&p).unwrap();
    let at = Assignment::new(vec![q().from_i64(5)], vec![], vec![]);
    assert_eq!(c.evaluate(&at).unwrap(), vec![q().zero()]);
}

#[test]
fn substitute_zero_drops_a_term() {
    let mut c = Circuit::new(q(), 2, 2, 0);
    let (x1, x2) = (c.input(Var::x(0)), c.input(Var::x(1)));
    let (y1, y2) = (c.input(Var::y(0)), c.input(Var::y(1)));
    let a = c.mul(&[x1, y1]);
    let b = c.mul(&[x2, y2]);
    let s = c.add(&[a, b]);
    c.output(s);
    let r = substitute(&c, &[(Var::x(1), q().zero())]).unwrap();
    let mut e = Circuit::new(q(), 2, 2, 0);
    let (x1, y1) = (e.input(Var::x(0)), e.input(Var::y(0)));
    let m = e.mul(&[x1, y1]);
    e.output(m);
    assert!(r.identity_test(&e, 20, 3).unwrap().is_equal());
    assert_eq!(substitute(&c, &[]).unwrap(), c);
    assert!(matches!(
        substitute(&c, &[(Var::x(5), q().one())]),
        Err(CircuitError::UnknownVariable(_))
    ));
}

#[test]
fn derivative_of_product() {
    let mut c = Circuit::new(q(), 2, 0, 0);
    let (x1, x2) = (c.input(Var::x(0)), c.input(Var::x(1)));
    let m = c.mul(&[x1, x2]);
    c.output(m);
    let (d, rep) = derivative_circuit(&c, false).unwrap();
    let at = Assignment::new(vec![q().from_i64(3), q().from_i64(7)], vec![], vec![]);
    assert_eq!(
        d.evaluate(&at).unwrap(),
        vec![q().from_i64(7), q().from_i64(3)]
    );
    assert!(rep.satisfied());
}

#[test]
fn derivative_of_square() {
    let mut c = Circuit::new(q(), 1, 0, 0);
    let x = c.input(Var::x(0));
    let m = c.mul(&[x, x]);
    c.output(m);
    let (d, _) = derivative_circuit(&c, false).unwrap();
    let at = Assignment::new(vec![q().from_i64(5)], vec![], vec![]);
    assert_eq!(d.evaluate(&at).unwrap(), vec![q().from_i64(10)]);
}

#[test]
fn derivative_of_power_sum_is_planar() {
    let c = power_sum_circuit(8).unwrap();
    let (d, rep) = derivative_circuit(&c, true).unwrap();
    assert!(d.is_planar());
    assert!(rep.satisfied());
    check_derivatives(&c, &d, 10, 8);
    // d/dx_i sum x^8 = 8 x_i^7 at x = (1..8)
    let at = Assignment::new((1..=8).map(|v| q().from_i64(v)).collect(), vec![], vec![]);
    let expect: Vec<_> = (1..=8i64).map(|v| q().from_i64(8 * v.pow(7))).collect();
    assert_eq!(d.evaluate(&at).unwrap(), expect);
}

#[test]
fn planar_derivatives_across_power_sums() {
    for n in [1, 2, 3, 5, 7, 16, 33, 100, 256] {
        let c = power_sum_circuit(n).unwrap();
        let (d, rep) = derivative_circuit(&c, true).unwrap();
        assert!(d.is_planar(), "n = {n}");
        assert!(
            rep.satisfied(),
            "n = {n}: {} > 40 * {}",
            rep.output_size,
            rep.input_size
        );
        check_derivatives(&c, &d, 3, n as u64);
    }
}

#[test]
fn derivative_preconditions() {
    let mut c = Circuit::new(q(), 1, 0, 0);
    let x = c.input(Var::x(0));
    c.output(x);
    c.output(x);
    assert!(matches!(
        derivative_circuit(&c, false),
        Err(CircuitError::Precondition(_))
    ));
    // reads x1 twice
    let mut c = Circuit::new(q(), 1, 0, 0);
    let (a, b) = (c.input(Var::x(0)), c.input(Var::x(0)));
    let m = c.mul(&[a, b]);
    c.output(m);
    assert!(derivative_circuit(&c, false).is_ok());
    assert!(matches!(
        derivative_circuit(&c, true),
        Err(CircuitError::Precondition(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn reduce_degree_preserves_semantics(seed in any::<u64>(), gates in 5usize..80, fanin in 2usize..5) {
        let c = random_circuit(&q(), 5, gates, fanin, seed);
        let (r, rep) = reduce_degree(&c).unwrap();
        prop_assert!(r.has_degree_at_most_two());
        prop_assert!(rep.satisfied());
        prop_assert!(r.identity_test(&c, 10, seed).unwrap().is_equal());
    }

    #[test]
    fn planarize_preserves_semantics(seed in any::<u64>(), gates in 5usize..60) {
        let c = random_circuit(&q(), 5, gates, 2, seed);
        let (p, rep) = planarize(&c, seed).unwrap();
        prop_assert!(p.is_planar());
        prop_assert!(rep.satisfied());
        prop_assert!(p.identity_test(&c, 10, seed).unwrap().is_equal());
        let (_, again) = planarize(&p, seed ^ 1).unwrap();
        prop_assert_eq!(again.gadgets, 0);
    }

    #[test]
    fn abp_conversion_matches_program(seed in any::<u64>(), v in 2usize..15, e in 1usize..40, planar in any::<bool>()) {
        let p = if planar {
            random_planar_abp(&q(), 4, 1 + v % 5, 1 + e % 6, seed)
        } else {
            random_abp(&q(), 4, v, e, seed)
        };
        let (c, rep) = abp_to_circuit(&p).unwrap();
        prop_assert!(p.identity_test_circuit(&c, 10, seed).unwrap().is_equal());
        prop_assert!(rep.satisfied());
        if planar {
            prop_assert!(c.is_planar());
        }
    }

    #[test]
    fn derivatives_match_dual_numbers(seed in any::<u64>(), gates in 3usize..60) {
        let c = random_circuit(&q(), 4, gates, 2, seed);
        let (d, rep) = derivative_circuit(&c, false).unwrap();
        prop_assert!(rep.satisfied());
        check_derivatives(&c, &d, 4, seed);
    }

    #[test]
    fn bilinearize_random_grid_forms(seed in any::<u64>(), rows in 1usize..5, cols in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Matrix::from_fn(q(), rows, cols, |_, _| q().from_i64(rng.gen_range(-2..3)));
        let c = grid_bilinear_circuit(&m);
        let c = planarize(&c, seed).unwrap().0;
        let (b, rep) = bilinearize(&c).unwrap();
        prop_assert!(b.is_planar());
        prop_assert!(b.is_bilinear_shape().unwrap());
        prop_assert_eq!(b.extract_bilinear_matrix().unwrap(), m);
        prop_assert!(rep.satisfied());
    }
}
