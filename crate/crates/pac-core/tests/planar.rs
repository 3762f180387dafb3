use pac_core::planar::{
    embed, is_planar, kuratowski_witness, planarize_dag, planarize_graph, test_planarity,
    KuratowskiKind, Planarity,
};
use pac_core::UGraph;
use proptest::prelude::*;

fn graph_from_mask(n: usize, mask: u64) -> UGraph {
    let mut e = Vec::new();
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask >> bit & 1 == 1 {
                e.push((i, j));
            }
            bit += 1;
        }
    }
    UGraph::new(n, e).unwrap()
}

fn adj_matrix(g: &UGraph) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; g.n()]; g.n()];
    for &(u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// Brute-force planarity for at most six vertices: with so few vertices a
/// Kuratowski subdivision is either K3,3 itself or K5 with at most one
/// subdivided edge.
fn small_planar_oracle(g: &UGraph) -> bool {
    let n = g.n();
    assert!(n <= 6);
    let a = adj_matrix(g);
    if n == 6 {
        for mask in 0u32..64 {
            if mask.count_ones() != 3 || mask & 1 == 0 {
                continue;
            }
            let left: Vec<usize> = (0..6).filter(|&i| mask >> i & 1 == 1).collect();
            let right: Vec<usize> = (0..6).filter(|&i| mask >> i & 1 == 0).collect();
            if left.iter().all(|&l| right.iter().all(|&r| a[l][r])) {
                return false;
            }
        }
    }
    if n >= 5 {
        for skip in 0..n.max(5) {
            let branch: Vec<usize> = (0..n).filter(|&i| n == 5 || i != skip).collect();
            if branch.len() != 5 {
                continue;
            }
            let spare = if n == 6 { Some(skip) } else { None };
            let mut missing = Vec::new();
            for x in 0..5 {
                for y in x + 1..5 {
                    if !a[branch[x]][branch[y]] {
                        missing.push((branch[x], branch[y]));
                    }
                }
            }
            let ok = match (missing.len(), spare) {
                (0, _) => true,
                (1, Some(s)) => a[missing[0].0][s] && a[missing[0].1][s],
                _ => false,
            };
            if ok {
                return false;
            }
            if n == 5 {
                break;
            }
        }
    }
    true
}

/// Suppresses degree-two vertices and checks the result is K5 or K3,3.
fn is_kuratowski_subdivision(g: &UGraph, edge_ids: &[usize]) -> Option<KuratowskiKind> {
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    for &e in edge_ids {
        let (u, v) = g.edges()[e];
        adj[u].push(v);
        adj[v].push(u);
    }
    let branch: Vec<usize> = (0..n).filter(|&v| adj[v].len() >= 3).collect();
    if (0..n).any(|v| adj[v].len() == 1) {
        return None;
    }
    let mut pairs = Vec::new();
    for &b in &branch {
        for &start in &adj[b] {
            let (mut prev, mut cur) = (b, start);
            while adj[cur].len() == 2 {
                let next = if adj[cur][0] == prev {
                    adj[cur][1]
                } else {
                    adj[cur][0]
                };
                prev = cur;
                cur = next;
            }
            if cur == b {
                return None;
            }
            pairs.push((b.min(cur), b.max(cur)));
        }
    }
    pairs.sort_unstable();
    let len = pairs.len();
    pairs.dedup();
    if pairs.len() * 2 != len {
        return None;
    }
    let deg = |v: usize| pairs.iter().filter(|&&(a, b)| a == v || b == v).count();
    if branch.len() == 5 && pairs.len() == 10 && branch.iter().all(|&v| deg(v) == 4) {
        return Some(KuratowskiKind::K5);
    }
    if branch.len() == 6 && pairs.len() == 9 && branch.iter().all(|&v| deg(v) == 3) {
        let b0 = branch[0];
        let side: Vec<usize> = branch
            .iter()
            .copied()
            .filter(|&v| v == b0 || !pairs.contains(&(b0.min(v), b0.max(v))))
            .collect();
        let bip = side.len() == 3
            && side
                .iter()
                .all(|&x| side.iter().all(|&y| !pairs.contains(&(x.min(y), x.max(y)))));
        if bip {
            return Some(KuratowskiKind::K33);
        }
    }
    None
}

fn grid(w: usize, h: usize) -> UGraph {
    let mut e = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let v = y * w + x;
            if x + 1 < w {
                e.push((v, v + 1));
            }
            if y + 1 < h {
                e.push((v, v + w));
            }
        }
    }
    UGraph::new(w * h, e).unwrap()
}

#[test]
fn exhaustive_agreement_with_brute_force_up_to_six_vertices() {
    for n in 0..=6usize {
        let pairs = n * n.saturating_sub(1) / 2;
        for mask in 0..1u64 << pairs {
            let g = graph_from_mask(n, mask);
            let expect = small_planar_oracle(&g);
            assert_eq!(is_planar(&g), expect, "n={n} mask={mask:b}");
            match test_planarity(&g) {
                Planarity::Embedding(r) => {
                    assert!(expect);
                    assert!(r.is_planar_embedding());
                }
                Planarity::Witness(w) => {
                    assert!(!expect);
                    assert_eq!(is_kuratowski_subdivision(&g, &w.edges), Some(w.kind));
                }
            }
        }
    }
}

#[test]
fn labeled_planar_graph_counts() {
    // labeled planar graphs on n vertices: 1, 2, 8, 64, 1023, 32071, 1823707
    let expect = [1u64, 1, 2, 8, 64, 1023, 32071, 1823707];
    for n in 1..=7usize {
        let pairs = n * (n - 1) / 2;
        let count = (0..1u64 << pairs)
            .filter(|&m| is_planar(&graph_from_mask(n, m)))
            .count() as u64;
        assert_eq!(count, expect[n], "n={n}");
    }
}

#[test]
fn grid_faces_follow_euler() {
    let r = embed(&grid(3, 3)).unwrap();
    assert_eq!(r.faces().len(), 5);
    let r = embed(&grid(40, 25)).unwrap();
    assert_eq!(r.faces().len(), 2 + 39 * 25 + 40 * 24 - 1000);
}

#[test]
fn complete_graph_crossings() {
    let k = |n: usize| graph_from_mask(n, (1u64 << (n * (n - 1) / 2)) - 1);
    assert_eq!(planarize_graph(&k(5), 0).crossings(), 1);
    let d6 = planarize_graph(&k(6), 0);
    assert!(d6.crossings() >= 3);
    assert!(d6.verify());
    let d7 = planarize_graph(&k(7), 0);
    assert!(d7.crossings() >= 9);
    assert!(d7.verify());
}

fn arb_graph() -> impl Strategy<Value = UGraph> {
    (2usize..14).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..(3 * n)).prop_map(move |e| UGraph::simple(n, e))
    })
}

fn arb_dag() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2usize..14).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..(3 * n)).prop_map(move |e| {
            let g = UGraph::simple(n, e.into_iter().filter(|&(a, b)| a != b));
            (
                n,
                g.edges()
                    .iter()
                    .map(|&(a, b)| (a.min(b), a.max(b)))
                    .collect(),
            )
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn witness_or_embedding(g in arb_graph()) {
        match test_planarity(&g) {
            Planarity::Embedding(r) => prop_assert!(r.is_planar_embedding()),
            Planarity::Witness(w) => {
                prop_assert_eq!(is_kuratowski_subdivision(&g, &w.edges), Some(w.kind));
                prop_assert!(kuratowski_witness(&g).is_some());
            }
        }
    }

    #[test]
    fn planarized_graph_recovers_input(g in arb_graph(), seed in any::<u64>()) {
        let d = planarize_graph(&g, seed);
        prop_assert!(d.verify());
        prop_assert_eq!(d.recover(), g.edges().to_vec());
        if is_planar(&g) {
            prop_assert_eq!(d.crossings(), 0);
        }
    }

    #[test]
    fn dag_planarization_keeps_direction((n, arcs) in arb_dag(), seed in any::<u64>()) {
        let prot = vec![false; arcs.len()];
        let d = planarize_dag(n, &arcs, &prot, seed);
        prop_assert!(d.verify());
        prop_assert_eq!(d.recover(), arcs.clone());
        // every path is increasing in a topological order of the drawing
        let nv = d.graph.n();
        let mut indeg = vec![0usize; nv];
        let mut outs = vec![Vec::new(); nv];
        for p in &d.paths {
            for w in p.windows(2) {
                outs[w[0]].push(w[1]);
                indeg[w[1]] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..nv).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &w in &outs[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        prop_assert_eq!(seen, nv);
    }
}
