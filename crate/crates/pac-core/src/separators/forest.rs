//! Two-measure forest separator: removes at most three vertices so that
//! both sides hold at most two thirds of the vertices and at most two
//! thirds of a distinguished subset.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use super::{mask, no_cross_edge, ratio, SeparatorError, SeparatorResult, SIDE_A, SIDE_B, SIDE_C};
use crate::planar::UGraph;
use crate::util::next_combination;

/// Largest separator the search may return.
pub const FOREST_SEPARATOR_SIZE: usize = 3;

/// Items larger than a sixth of either measure are placed exhaustively.
const EXACT_ITEMS: usize = 13;

/// Forests this small fall back to trying every separator of size <= 3.
const EXHAUSTIVE_LIMIT: usize = 60;

/// Partition `(A, B, C)` of a forest with `|C| <= 3`, `|A|, |B| <= 2|V|/3`
/// and `|V' ∩ A|, |V' ∩ B| <= 2|V'|/3`. Weights in the result are
/// fractions of `V'`.
pub fn forest_separator(f: &UGraph, vp: &[usize]) -> Result<SeparatorResult, SeparatorError> {
    if !f.is_forest() {
        return Err(SeparatorError::Cyclic);
    }
    let inv = mask(f.n(), vp)?;
    let side = split(f, &inv)?;
    let pick = |s: u8| -> Vec<usize> { (0..f.n()).filter(|&v| side[v] == s).collect() };
    let m = inv.iter().filter(|&&x| x).count() as u128;
    let count = |s: u8| (0..f.n()).filter(|&v| side[v] == s && inv[v]).count() as u128;
    Ok(SeparatorResult {
        a: pick(SIDE_A),
        b: pick(SIDE_B),
        c: pick(SIDE_C),
        weight_a: ratio(count(SIDE_A), m),
        weight_b: ratio(count(SIDE_B), m),
        total_weight: ratio(m, m),
        claimed_sq: (FOREST_SEPARATOR_SIZE * FOREST_SEPARATOR_SIZE) as u128,
    })
}

/// Sides for a forest and membership mask of `V'`; verified.
pub(crate) fn split(f: &UGraph, inv: &[bool]) -> Result<Vec<u8>, SeparatorError> {
    let n = f.n();
    let m = inv.iter().filter(|&&x| x).count();
    let ok = |side: &[u8]| -> bool {
        let mut cnt = [[0usize; 2]; 2];
        for v in 0..n {
            if side[v] < 2 {
                cnt[side[v] as usize][0] += 1;
                cnt[side[v] as usize][1] += usize::from(inv[v]);
            }
        }
        cnt.iter().all(|c| 3 * c[0] <= 2 * n && 3 * c[1] <= 2 * m)
            && side.iter().filter(|&&s| s == SIDE_C).count() <= FOREST_SEPARATOR_SIZE
            && no_cross_edge(f, side)
    };
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<usize>> = VecDeque::from([Vec::new()]);
    seen.insert(Vec::new());
    while let Some(c) = queue.pop_front() {
        let mut cut = vec![false; n];
        for &v in &c {
            cut[v] = true;
        }
        let (comp, k) = f.components_without(&cut);
        if let Some(side) = try_bins(n, m, inv, &cut, &comp, k) {
            debug_assert!(ok(&side));
            if ok(&side) {
                return Ok(side);
            }
        }
        if c.len() == FOREST_SEPARATOR_SIZE {
            continue;
        }
        for x in candidates(f, inv, &cut, &comp, k) {
            let mut next = c.clone();
            next.push(x);
            next.sort_unstable();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    if n <= EXHAUSTIVE_LIMIT {
        for size in 1..=FOREST_SEPARATOR_SIZE.min(n) {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                let mut cut = vec![false; n];
                for &v in &idx {
                    cut[v] = true;
                }
                let (comp, k) = f.components_without(&cut);
                if let Some(side) = try_bins(n, m, inv, &cut, &comp, k) {
                    if ok(&side) {
                        return Ok(side);
                    }
                }
                if !next_combination(&mut idx, n) {
                    break;
                }
            }
        }
    }
    Err(SeparatorError::Bound(alloc::format!(
        "no forest separator of size {FOREST_SEPARATOR_SIZE} found (n = {n}, |V'| = {m})"
    )))
}

/// Centroids of the heaviest components under three measures: vertex
/// count, `V'` count, and their normalised sum.
fn candidates(f: &UGraph, inv: &[bool], cut: &[bool], comp: &[usize], k: usize) -> Vec<usize> {
    let n = f.n();
    let m = inv.iter().filter(|&&x| x).count().max(1) as u128;
    let mut size = vec![0u128; k];
    let mut marked = vec![0u128; k];
    for v in 0..n {
        if !cut[v] {
            size[comp[v]] += 1;
            marked[comp[v]] += u128::from(inv[v]);
        }
    }
    let mut heavy: Vec<usize> = Vec::new();
    for key in [&size, &marked] {
        let mut ids: Vec<usize> = (0..k).filter(|&i| key[i] > 0).collect();
        ids.sort_by(|&a, &b| key[b].cmp(&key[a]).then(a.cmp(&b)));
        for &i in ids.iter().take(2) {
            if !heavy.contains(&i) {
                heavy.push(i);
            }
        }
    }
    let measures: [&dyn Fn(usize) -> u128; 3] = [&|_| 1, &|v| u128::from(inv[v]), &|v| {
        m + if inv[v] { n as u128 } else { 0 }
    }];
    let mut out = Vec::new();
    for &h in &heavy {
        for mu in measures {
            if let Some(c) = centroid(f, cut, comp, h, mu) {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Vertex of component `h` minimising the heaviest piece left after its
/// removal; `None` when the component has no weight.
fn centroid(
    f: &UGraph,
    cut: &[bool],
    comp: &[usize],
    h: usize,
    mu: &dyn Fn(usize) -> u128,
) -> Option<usize> {
    let root = (0..f.n()).find(|&v| !cut[v] && comp[v] == h)?;
    let mut order = vec![root];
    let mut parent = vec![usize::MAX; f.n()];
    parent[root] = root;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &(u, _) in f.neighbors(v) {
            if !cut[u] && parent[u] == usize::MAX {
                parent[u] = v;
                order.push(u);
            }
        }
    }
    let mut sub = vec![0u128; f.n()];
    let mut worst = vec![0u128; f.n()];
    for &v in order.iter().rev() {
        sub[v] += mu(v);
        if v != root {
            let p = parent[v];
            sub[p] += sub[v];
            worst[p] = worst[p].max(sub[v]);
        }
    }
    let total = sub[root];
    if total == 0 {
        return None;
    }
    order
        .iter()
        .map(|&v| (worst[v].max(total - sub[v]), v))
        .min()
        .map(|(_, v)| v)
}

/// Assigns the components of `F - C` to two sides within both two-thirds
/// limits: large items exhaustively, the rest greedily.
fn try_bins(
    n: usize,
    m: usize,
    inv: &[bool],
    cut: &[bool],
    comp: &[usize],
    k: usize,
) -> Option<Vec<u8>> {
    let (nn, mm) = (n as u128, m.max(1) as u128);
    let mut items: Vec<(u128, u128, usize)> = vec![(0, 0, 0); k];
    for (i, it) in items.iter_mut().enumerate() {
        it.2 = i;
    }
    for v in 0..n {
        if !cut[v] {
            items[comp[v]].0 += 1;
            items[comp[v]].1 += u128::from(inv[v]);
        }
    }
    // normalised load: a/n vs b/m compared as a*m vs b*n
    let load = |a: u128, b: u128| (a * mm).max(b * nn);
    items.sort_by(|x, y| load(y.0, y.1).cmp(&load(x.0, x.1)).then(x.2.cmp(&y.2)));
    let big = items
        .iter()
        .take(EXACT_ITEMS)
        .take_while(|it| 6 * load(it.0, it.1) > nn * mm)
        .count()
        .max(usize::from(!items.is_empty()));
    let fits = |a: u128, b: u128| 3 * a <= 2 * nn && 3 * b <= 2 * m as u128;
    for pattern in 0..1u32 << (big.saturating_sub(1)) {
        let mut bins = [(0u128, 0u128); 2];
        let mut bin_of = vec![0u8; k];
        for (j, it) in items.iter().take(big).enumerate() {
            let s = if j == 0 {
                0
            } else {
                (pattern >> (j - 1) & 1) as usize
            };
            bins[s].0 += it.0;
            bins[s].1 += it.1;
            bin_of[it.2] = s as u8;
        }
        if !bins.iter().all(|&(a, b)| fits(a, b)) {
            continue;
        }
        for it in items.iter().skip(big) {
            let l0 = load(bins[0].0 + it.0, bins[0].1 + it.1).max(load(bins[1].0, bins[1].1));
            let l1 = load(bins[1].0 + it.0, bins[1].1 + it.1).max(load(bins[0].0, bins[0].1));
            let s = usize::from(l1 < l0);
            bins[s].0 += it.0;
            bins[s].1 += it.1;
            bin_of[it.2] = s as u8;
        }
        if bins.iter().all(|&(a, b)| fits(a, b)) {
            return Some(
                (0..n)
                    .map(|v| if cut[v] { SIDE_C } else { bin_of[comp[v]] })
                    .collect(),
            );
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::{path_graph, star_graph};

    #[test]
    fn star_cuts_its_center() {
        let g = star_graph(9);
        let leaves: Vec<usize> = (1..10).collect();
        let r = forest_separator(&g, &leaves).unwrap();
        assert_eq!(r.c, vec![0]);
        assert!(r.separates(&g) && r.balanced());
    }

    #[test]
    fn single_vertex_is_forced() {
        let r = forest_separator(&path_graph(1), &[0]).unwrap();
        assert_eq!(r.c, vec![0]);
    }

    #[test]
    fn path_with_three_marks() {
        let g = path_graph(9);
        let r = forest_separator(&g, &[0, 4, 8]).unwrap();
        assert!(r.c.len() <= 3);
        assert!(r.separates(&g) && r.balanced());
        assert!(3 * r.a.len() <= 18 && 3 * r.b.len() <= 18);
    }

    #[test]
    fn rejects_cycles() {
        let g = UGraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(forest_separator(&g, &[0]), Err(SeparatorError::Cyclic));
    }
}
