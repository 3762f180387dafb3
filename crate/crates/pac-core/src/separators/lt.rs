//! Weighted planar separator: BFS levels give a two-level cut; if the band
//! between the cut levels is still heavy, the inner levels are contracted
//! into a root, the band is triangulated, and the shortest balanced
//! fundamental cycle of the BFS tree finishes the separator.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::{no_cross_edge, SeparatorError, SeparatorResult, SIDE_A, SIDE_B, SIDE_C};
use crate::planar::{embed, is_planar, UGraph};
use crate::util::Dsu;

/// Weight `1/n` on each of `n` vertices.
pub fn uniform_weights(n: usize) -> Vec<BigRational> {
    let w = BigRational::new(BigInt::one(), BigInt::from(n.max(1)));
    vec![w; n]
}

/// Splits a planar graph into `(A, B, C)` with no `A`-`B` edge, each side
/// of weight at most two thirds of the total and `|C|^2 <= 8|V|`. Weights
/// are exact non-negative rationals summing to at most 1; all-zero weights
/// balance vertex counts instead.
pub fn lipton_tarjan(g: &UGraph, w: &[BigRational]) -> Result<SeparatorResult, SeparatorError> {
    if w.len() != g.n() {
        return Err(SeparatorError::WeightCount {
            expected: g.n(),
            found: w.len(),
        });
    }
    if let Some(v) = w.iter().position(|x| x.is_negative()) {
        return Err(SeparatorError::NegativeWeight(v));
    }
    if w.iter().sum::<BigRational>() > BigRational::one() {
        return Err(SeparatorError::WeightSum);
    }
    if !is_planar(g) {
        return Err(SeparatorError::NonPlanar);
    }
    let den = w.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let iw: Vec<u128> = w
        .iter()
        .map(|x| (x.numer() * (&den / x.denom())).to_u128())
        .collect::<Option<_>>()
        .ok_or(SeparatorError::WeightPrecision)?;
    iw.iter()
        .try_fold(0u128, |a, &x| a.checked_add(x))
        .filter(|&t| t < 1 << 120)
        .ok_or(SeparatorError::WeightPrecision)?;
    let side = split(g, &iw)?;
    let pick = |s: u8| -> Vec<usize> { (0..g.n()).filter(|&v| side[v] == s).collect() };
    let weigh = |s: u8| -> BigRational {
        (0..g.n())
            .filter(|&v| side[v] == s)
            .map(|v| w[v].clone())
            .sum()
    };
    Ok(SeparatorResult {
        a: pick(SIDE_A),
        b: pick(SIDE_B),
        c: pick(SIDE_C),
        weight_a: weigh(SIDE_A),
        weight_b: weigh(SIDE_B),
        total_weight: w.iter().sum(),
        claimed_sq: 8 * g.n() as u128,
    })
}

/// Side (`SIDE_A`, `SIDE_B` or `SIDE_C`) of every vertex for integer
/// weights; the graph must be planar. Verified before returning.
pub(crate) fn split(g: &UGraph, w: &[u128]) -> Result<Vec<u8>, SeparatorError> {
    let n = g.n();
    let unit;
    let mut total: u128 = w.iter().sum();
    let w = if total == 0 {
        unit = vec![1u128; n];
        total = n as u128;
        &unit[..]
    } else {
        w
    };
    let mut in_c = vec![false; n];
    if n > 0 {
        separate(g, w, total, &mut in_c)?;
    }
    let side = assign(g, w, total, &in_c);
    let weight = |s: u8| -> u128 { (0..n).filter(|&v| side[v] == s).map(|v| w[v]).sum() };
    let c = side.iter().filter(|&&s| s == SIDE_C).count() as u128;
    if !no_cross_edge(g, &side) {
        return Err(SeparatorError::Bound("separator leaves an A-B edge".into()));
    }
    for s in [SIDE_A, SIDE_B] {
        if 3 * weight(s) > 2 * total {
            return Err(SeparatorError::Bound(format!(
                "side weight {} of {total} exceeds two thirds",
                weight(s)
            )));
        }
    }
    if c * c > 8 * n as u128 {
        return Err(SeparatorError::Bound(format!(
            "|C| = {c} exceeds 2*sqrt(2*{n})"
        )));
    }
    Ok(side)
}

/// Marks a separator in `in_c` such that every component of the rest
/// weighs at most two thirds of `total`.
fn separate(g: &UGraph, w: &[u128], total: u128, in_c: &mut [bool]) -> Result<(), SeparatorError> {
    let n = g.n();
    let (comp, k) = g.components();
    let mut cw = vec![0u128; k];
    for v in 0..n {
        cw[comp[v]] += w[v];
    }
    let Some(h) = (0..k).find(|&i| 3 * cw[i] > 2 * total) else {
        return Ok(());
    };
    let root = (0..n)
        .find(|&v| comp[v] == h)
        .expect("component has a vertex");
    let mut level = vec![usize::MAX; n];
    let mut order = vec![root];
    level[root] = 0;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &(u, _) in g.neighbors(v) {
            if level[u] == usize::MAX {
                level[u] = level[v] + 1;
                order.push(u);
            }
        }
    }
    let depth = level[*order.last().expect("root")];
    let mut size = vec![0usize; depth + 2];
    let mut lw = vec![0u128; depth + 2];
    for &v in &order {
        size[level[v]] += 1;
        lw[level[v]] += w[v];
    }
    let mut cum = 0u128;
    let mut l1 = depth;
    for (l, &x) in lw.iter().enumerate().take(depth + 1) {
        cum += x;
        if 2 * cum >= total {
            l1 = l;
            break;
        }
    }
    // l0 in -1..=l1 (stored shifted by one), l2 in l1+1..=depth+1
    let size_at = |l: i64| if l < 0 { 0 } else { size[l as usize] };
    let l0 = (-1..=l1 as i64)
        .rev()
        .min_by_key(|&l| size_at(l) + 2 * (l1 as i64 - l) as usize)
        .expect("range is non-empty");
    let l2 = (l1 + 1..=depth + 1)
        .min_by_key(|&l| size[l] + 2 * (l - l1 - 1))
        .expect("range is non-empty");
    let mut mid_w = 0u128;
    for &v in &order {
        let l = level[v] as i64;
        if l == l0 || level[v] == l2 {
            in_c[v] = true;
        } else if l > l0 && level[v] < l2 {
            mid_w += w[v];
        }
    }
    if 3 * mid_w <= 2 * total {
        return Ok(());
    }
    let middle: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&v| (level[v] as i64) > l0 && level[v] < l2)
        .collect();
    cycle_separator(g, w, total, &level, &middle, l0, in_c)
}

/// Band between the cut levels, contracted inner levels as root `0` when
/// `l0 >= 0`; otherwise the BFS root itself is local vertex `0`.
fn cycle_separator(
    g: &UGraph,
    w: &[u128],
    total: u128,
    level: &[usize],
    middle: &[usize],
    l0: i64,
    in_c: &mut [bool],
) -> Result<(), SeparatorError> {
    let virtual_root = l0 >= 0;
    let off = usize::from(virtual_root);
    let mut loc = vec![usize::MAX; g.n()];
    for (i, &v) in middle.iter().enumerate() {
        loc[v] = i + off;
    }
    let mut edges = Vec::new();
    for &v in middle {
        for &(u, _) in g.neighbors(v) {
            if loc[u] != usize::MAX {
                if v < u {
                    edges.push((loc[v], loc[u]));
                }
            } else if virtual_root && level[u] as i64 == l0 {
                edges.push((0, loc[v]));
            }
        }
    }
    let m = UGraph::simple(middle.len() + off, edges);
    let real = |x: usize| -> Option<usize> {
        if x >= off && x < m.n() {
            Some(middle[x - off])
        } else {
            None
        }
    };
    if m.n() <= 2 {
        for x in 0..m.n() {
            if let Some(v) = real(x) {
                in_c[v] = true;
            }
        }
        return Ok(());
    }
    let rot = embed(&m).ok_or(SeparatorError::NonPlanar)?;
    // BFS tree from the root
    let mut parent = vec![usize::MAX; m.n()];
    let mut depth = vec![0usize; m.n()];
    let mut tree_edge = vec![false; m.m()];
    let mut seen = vec![false; m.n()];
    let mut bfs = vec![0usize];
    seen[0] = true;
    let mut i = 0;
    while i < bfs.len() {
        let v = bfs[i];
        i += 1;
        for &(u, e) in m.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                parent[u] = v;
                depth[u] = depth[v] + 1;
                tree_edge[e] = true;
                bfs.push(u);
            }
        }
    }
    if bfs.len() != m.n() {
        return Err(SeparatorError::Bound("band is disconnected".into()));
    }
    // star-triangulate every non-triangular face with a weightless dummy
    let mut ends: Vec<(usize, usize)> = m.edges().to_vec();
    let mut tris: Vec<[usize; 3]> = Vec::new();
    let mut corners: Vec<[usize; 3]> = Vec::new();
    let mut nv = m.n();
    for f in rot.faces() {
        let d = &f.darts;
        let len = d.len();
        if len == 3 {
            tris.push([d[0].1, d[1].1, d[2].1]);
            corners.push([d[0].0, d[1].0, d[2].0]);
            continue;
        }
        let x = nv;
        nv += 1;
        parent.push(d[0].0);
        depth.push(depth[d[0].0] + 1);
        let s0 = ends.len();
        for &(t, _) in d {
            ends.push((x, t));
            tree_edge.push(false);
        }
        tree_edge[s0] = true;
        for k in 0..len {
            let k1 = (k + 1) % len;
            tris.push([s0 + k, d[k].1, s0 + k1]);
            corners.push([x, d[k].0, d[k1].0]);
        }
    }
    let ne = ends.len();
    let mut wl = vec![0u128; nv];
    for x in off..m.n() {
        wl[x] = w[middle[x - off]];
    }
    let mut edge_tri = vec![[usize::MAX; 2]; ne];
    for (t, es) in tris.iter().enumerate() {
        for &e in es {
            let slot = if edge_tri[e][0] == usize::MAX { 0 } else { 1 };
            edge_tri[e][slot] = t;
        }
    }
    // dual spanning tree over non-tree edges
    let nt = tris.len();
    let mut dadj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nt];
    for e in 0..ne {
        if !tree_edge[e] {
            let [a, b] = edge_tri[e];
            if a == usize::MAX || b == usize::MAX {
                return Err(SeparatorError::Bound("edge missing a face".into()));
            }
            dadj[a].push((b, e));
            dadj[b].push((a, e));
        }
    }
    let mut dparent = vec![(usize::MAX, usize::MAX); nt];
    let mut tin = vec![usize::MAX; nt];
    let mut pre = Vec::with_capacity(nt);
    let mut stack = vec![0usize];
    tin[0] = 0;
    pre.push(0);
    let mut cursor = vec![0usize; nt];
    while let Some(&t) = stack.last() {
        if cursor[t] < dadj[t].len() {
            let (u, e) = dadj[t][cursor[t]];
            cursor[t] += 1;
            if tin[u] == usize::MAX {
                tin[u] = pre.len();
                pre.push(u);
                dparent[u] = (t, e);
                stack.push(u);
            }
        } else {
            stack.pop();
        }
    }
    if pre.len() != nt {
        return Err(SeparatorError::Bound(
            "dual of the co-tree is disconnected".into(),
        ));
    }
    // each weighted vertex lies strictly inside exactly the cycles whose
    // dual subtree holds all its corners, i.e. the lca of its corner faces
    let mut lo = vec![usize::MAX; nv];
    let mut hi = vec![0usize; nv];
    for (t, cs) in corners.iter().enumerate() {
        for &v in cs {
            if wl[v] > 0 {
                lo[v] = lo[v].min(tin[t]);
                hi[v] = hi[v].max(tin[t]);
            }
        }
    }
    let weighted: Vec<usize> = (0..nv).filter(|&v| wl[v] > 0).collect();
    let dpar: Vec<usize> = dparent.iter().map(|p| p.0).collect();
    let q: Vec<(usize, usize)> = weighted.iter().map(|&v| (pre[lo[v]], pre[hi[v]])).collect();
    let home = offline_lca(&dpar, 0, &q);
    let mut sub = vec![0u128; nt];
    for (i, &v) in weighted.iter().enumerate() {
        sub[home[i]] += wl[v];
    }
    for &t in pre.iter().rev() {
        let p = dpar[t];
        if p != usize::MAX {
            sub[p] += sub[t];
        }
    }
    // cycle weights through prefix sums along the primal tree
    let mut pw = vec![0u128; nv];
    for &v in &bfs {
        pw[v] = wl[v]
            + if parent[v] == usize::MAX {
                0
            } else {
                pw[parent[v]]
            };
    }
    for x in m.n()..nv {
        pw[x] = pw[parent[x]];
    }
    let cotree: Vec<usize> = (0..ne).filter(|&e| !tree_edge[e]).collect();
    let cq: Vec<(usize, usize)> = cotree.iter().map(|&e| ends[e]).collect();
    let meet = offline_lca(&parent, 0, &cq);
    let mid_total: u128 = wl.iter().sum();
    let dummy = |x: usize| x >= m.n();
    let mut best: Option<(usize, usize)> = None;
    for (i, &e) in cotree.iter().enumerate() {
        let (u, v) = ends[e];
        let l = meet[i];
        let [a, b] = edge_tri[e];
        let child = if dparent[a].1 == e { a } else { b };
        let inside = sub[child];
        let on_cycle = pw[u] + pw[v] - 2 * pw[l] + wl[l];
        let Some(outside) = mid_total.checked_sub(inside + on_cycle) else {
            return Err(SeparatorError::Bound("cycle weights inconsistent".into()));
        };
        if 3 * inside > 2 * total || 3 * outside > 2 * total {
            continue;
        }
        let len = depth[u] + depth[v] + 1
            - 2 * depth[l]
            - usize::from(l == 0 && virtual_root)
            - usize::from(dummy(u))
            - usize::from(dummy(v));
        if best.is_none_or(|(bl, _)| len < bl) {
            best = Some((len, i));
        }
    }
    let Some((_, i)) = best else {
        return Err(SeparatorError::Bound(
            "no balanced fundamental cycle".into(),
        ));
    };
    let (mut u, mut v) = ends[cotree[i]];
    let l = meet[i];
    for x in [&mut u, &mut v] {
        loop {
            if let Some(r) = real(*x) {
                in_c[r] = true;
            }
            if *x == l {
                break;
            }
            *x = parent[*x];
        }
    }
    Ok(())
}

/// Lowest common ancestors for a batch of queries (Tarjan's offline
/// algorithm); `parent[root] = usize::MAX`.
fn offline_lca(parent: &[usize], root: usize, queries: &[(usize, usize)]) -> Vec<usize> {
    let n = parent.len();
    let mut start = vec![0usize; n + 1];
    for (v, &p) in parent.iter().enumerate() {
        if p != usize::MAX && v != root {
            start[p + 1] += 1;
        }
    }
    for i in 0..n {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut kids = vec![0usize; start[n]];
    for (v, &p) in parent.iter().enumerate() {
        if p != usize::MAX && v != root {
            kids[fill[p]] = v;
            fill[p] += 1;
        }
    }
    let mut qs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, &(a, b)) in queries.iter().enumerate() {
        qs[a].push((b, i));
        qs[b].push((a, i));
    }
    let mut ans = vec![usize::MAX; queries.len()];
    let mut dsu = Dsu::new(n);
    let mut anc: Vec<usize> = (0..n).collect();
    let mut done = vec![false; n];
    let mut stack = vec![(root, start[root])];
    while let Some(&mut (v, ref mut next)) = stack.last_mut() {
        if *next < start[v + 1] {
            let c = kids[*next];
            *next += 1;
            stack.push((c, start[c]));
            continue;
        }
        stack.pop();
        done[v] = true;
        for &(o, i) in &qs[v] {
            if done[o] {
                ans[i] = anc[dsu.find(o)];
            }
        }
        if let Some(&(p, _)) = stack.last() {
            dsu.union(v, p);
            let r = dsu.find(p);
            anc[r] = p;
        }
    }
    ans
}

/// Groups the components of `G - C` into two sides (heaviest first, each to
/// the lighter side), then moves separator vertices that touch at most one
/// side into it while the balance allows.
fn assign(g: &UGraph, w: &[u128], total: u128, in_c: &[bool]) -> Vec<u8> {
    let n = g.n();
    let (comp, k) = g.components_without(in_c);
    let mut cw = vec![0u128; k];
    let mut cs = vec![0usize; k];
    for v in 0..n {
        if !in_c[v] {
            cw[comp[v]] += w[v];
            cs[comp[v]] += 1;
        }
    }
    let mut ids: Vec<usize> = (0..k).collect();
    ids.sort_by(|&a, &b| cw[b].cmp(&cw[a]).then(cs[b].cmp(&cs[a])).then(a.cmp(&b)));
    let mut bin_w = [0u128; 2];
    let mut bin_n = [0usize; 2];
    let mut comp_side = vec![0u8; k];
    for &c in &ids {
        let s = usize::from((bin_w[1], bin_n[1]) < (bin_w[0], bin_n[0]));
        comp_side[c] = s as u8;
        bin_w[s] += cw[c];
        bin_n[s] += cs[c];
    }
    let mut side: Vec<u8> = (0..n)
        .map(|v| if in_c[v] { SIDE_C } else { comp_side[comp[v]] })
        .collect();
    let touches = |side: &[u8], v: usize| -> (bool, bool) {
        let mut t = (false, false);
        for &(u, _) in g.neighbors(v) {
            match side[u] {
                SIDE_A => t.0 = true,
                SIDE_B => t.1 = true,
                _ => {}
            }
        }
        t
    };
    let mut cands: Vec<(usize, usize)> = (0..n)
        .filter(|&v| in_c[v])
        .map(|v| {
            let t = touches(&side, v);
            (usize::from(t.0) + usize::from(t.1), v)
        })
        .collect();
    cands.sort_unstable();
    for (_, v) in cands {
        let s = match touches(&side, v) {
            (true, true) => continue,
            (true, false) => 0,
            (false, true) => 1,
            (false, false) => usize::from((bin_w[1], bin_n[1]) < (bin_w[0], bin_n[0])),
        };
        if 3 * (bin_w[s] + w[v]) <= 2 * total {
            side[v] = s as u8;
            bin_w[s] += w[v];
            bin_n[s] += 1;
        }
    }
    side
}
