//! Labelled two-colour partition: delete few vertices so that many left
//! labels and equally many right labels end up in different components.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{lt, SeparatorError};
use crate::flow::vertex_disjoint;
use crate::planar::{is_planar, UGraph};

/// A vertex label from one of the two label families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    /// A label from the first family.
    Left(usize),
    /// A label from the second family.
    Right(usize),
}

/// How the deleted set was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TuranStrategy {
    /// A minimum vertex cut between all left and all right occurrences.
    MinCut,
    /// Repeated weighted planar separators.
    Recursive,
}

/// Labelled occurrences in one component after deletion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComponentCensus {
    /// Vertices in the component.
    pub size: usize,
    /// Occurrences of kept left labels.
    pub left: usize,
    /// Occurrences of kept right labels.
    pub right: usize,
}

/// Result of [`turan_partition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledPartitionResult {
    /// Kept left label ids, sorted.
    pub z0: Vec<usize>,
    /// Kept right label ids, sorted; same length as `z0`.
    pub z0p: Vec<usize>,
    /// Deleted vertices, sorted.
    pub removed: Vec<usize>,
    /// Per-component census of the graph without `removed`.
    pub census: Vec<ComponentCensus>,
    /// Which candidate was chosen.
    pub strategy: TuranStrategy,
    /// Smaller of the two distinct label counts.
    pub s: usize,
    /// Occurrence bound the instance was checked against.
    pub k: usize,
}

impl LabeledPartitionResult {
    /// Whether no component of `g` minus `removed` carries both a kept left
    /// and a kept right label.
    pub fn separates(&self, g: &UGraph, labels: &[Option<Label>]) -> bool {
        let mut cut = vec![false; g.n()];
        for &v in &self.removed {
            cut[v] = true;
        }
        let (comp, k) = g.components_without(&cut);
        let mut seen = vec![[false; 2]; k];
        for v in 0..g.n() {
            if cut[v] {
                continue;
            }
            match labels[v] {
                Some(Label::Left(i)) if self.z0.binary_search(&i).is_ok() => {
                    seen[comp[v]][0] = true
                }
                Some(Label::Right(i)) if self.z0p.binary_search(&i).is_ok() => {
                    seen[comp[v]][1] = true
                }
                _ => {}
            }
        }
        seen.iter().all(|s| !(s[0] && s[1]))
    }
}

/// Rounds of recursive splitting tried before settling.
const MAX_ROUNDS: usize = 32;

/// Finds `V*` and label sets `Z0`, `Z0'` of equal size with `|Z0| >= s/9^k`
/// and `|V*| <= 450 k sqrt|V|`, such that no component of `g - V*` holds
/// labels from both. `labels[v]` is the label of vertex `v`, if any.
pub fn turan_partition(
    g: &UGraph,
    labels: &[Option<Label>],
    k: usize,
) -> Result<LabeledPartitionResult, SeparatorError> {
    let n = g.n();
    if labels.len() != n {
        return Err(SeparatorError::WeightCount {
            expected: n,
            found: labels.len(),
        });
    }
    let mut occ: BTreeMap<Label, usize> = BTreeMap::new();
    for l in labels.iter().flatten() {
        *occ.entry(*l).or_default() += 1;
    }
    if let Some((&label, &count)) = occ.iter().find(|(_, &c)| c > k) {
        return Err(SeparatorError::Occurrences { label, count, k });
    }
    if !is_planar(g) {
        return Err(SeparatorError::NonPlanar);
    }
    let lefts = occ.keys().filter(|l| matches!(l, Label::Left(_))).count();
    let s = lefts.min(occ.len() - lefts);
    let budget_sq = (450 * k as u128).pow(2) * n as u128;
    let within = |removed: usize| (removed as u128).pow(2) <= budget_sq;

    let mut best: Option<Candidate> = None;
    let consider = |best: &mut Option<Candidate>, cut: Vec<bool>, strategy: TuranStrategy| {
        let c = colour(g, labels, &cut);
        let size = cut.iter().filter(|&&x| x).count();
        let better = best.as_ref().is_none_or(|b| {
            (c.value(), core::cmp::Reverse(size))
                > (b.colouring.value(), core::cmp::Reverse(b.size))
        });
        if within(size) && better {
            *best = Some(Candidate {
                cut,
                size,
                strategy,
                colouring: c,
            });
        }
    };

    // min vertex cut between every left and every right occurrence
    let arcs: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .flat_map(|&(u, v)| [(u, v), (v, u)])
        .collect();
    let of = |want_left: bool| -> Vec<usize> {
        (0..n)
            .filter(|&v| {
                matches!(labels[v], Some(Label::Left(_)) if want_left)
                    || matches!(labels[v], Some(Label::Right(_)) if !want_left)
            })
            .collect()
    };
    let flow = vertex_disjoint(n, &arcs, &of(true), &of(false));
    let mut cut = vec![false; n];
    for &v in &flow.cut {
        cut[v] = true;
    }
    consider(&mut best, cut, TuranStrategy::MinCut);

    // recursive separators on the component with the most occurrences
    let mut cut = vec![false; n];
    consider(&mut best, cut.clone(), TuranStrategy::Recursive);
    for _ in 0..MAX_ROUNDS {
        let (comp, kc) = g.components_without(&cut);
        let mut load = vec![0usize; kc];
        for v in 0..n {
            if !cut[v] && labels[v].is_some() {
                load[comp[v]] += 1;
            }
        }
        let Some(h) = (0..kc)
            .filter(|&c| load[c] >= 2)
            .max_by_key(|&c| (load[c], core::cmp::Reverse(c)))
        else {
            break;
        };
        let keep: Vec<bool> = (0..n).map(|v| !cut[v] && comp[v] == h).collect();
        let (sub, back) = g.induced(&keep);
        let w: Vec<u128> = back
            .iter()
            .map(|&v| u128::from(labels[v].is_some()))
            .collect();
        let side = lt::split(&sub, &w)?;
        let mut next = cut.clone();
        for (i, &v) in back.iter().enumerate() {
            if side[i] == super::SIDE_C {
                next[v] = true;
            }
        }
        if !within(next.iter().filter(|&&x| x).count()) {
            break;
        }
        cut = next;
        consider(&mut best, cut.clone(), TuranStrategy::Recursive);
        if best.as_ref().is_some_and(|b| b.colouring.value() >= s) {
            break;
        }
    }

    let Candidate {
        cut,
        strategy,
        colouring: c,
        ..
    } = best.ok_or_else(|| SeparatorError::Bound("no candidate fits the size budget".into()))?;
    let m = c.value();
    let mut z0 = c.left;
    let mut z0p = c.right;
    z0.truncate(m);
    z0p.truncate(m);
    let removed: Vec<usize> = (0..n).filter(|&v| cut[v]).collect();
    let (comp, kc) = g.components_without(&cut);
    let mut census = vec![
        ComponentCensus {
            size: 0,
            left: 0,
            right: 0
        };
        kc
    ];
    for v in 0..n {
        if cut[v] {
            continue;
        }
        let e = &mut census[comp[v]];
        e.size += 1;
        match labels[v] {
            Some(Label::Left(i)) if z0.binary_search(&i).is_ok() => e.left += 1,
            Some(Label::Right(i)) if z0p.binary_search(&i).is_ok() => e.right += 1,
            _ => {}
        }
    }
    let r = LabeledPartitionResult {
        z0,
        z0p,
        removed,
        census,
        strategy,
        s,
        k,
    };
    if !r.separates(g, labels) {
        return Err(SeparatorError::Bound(
            "a component holds labels from both sides".into(),
        ));
    }
    let scale = 9u128.checked_pow(k as u32).unwrap_or(u128::MAX);
    if (r.z0.len() as u128).saturating_mul(scale) < s as u128 {
        return Err(SeparatorError::Bound(format!(
            "kept {} labels, fewer than {s}/9^{k}",
            r.z0.len()
        )));
    }
    if !within(r.removed.len()) {
        return Err(SeparatorError::Bound(format!(
            "deleted {} vertices, more than 450*{k}*sqrt({n})",
            r.removed.len()
        )));
    }
    Ok(r)
}

struct Candidate {
    cut: Vec<bool>,
    size: usize,
    strategy: TuranStrategy,
    colouring: Colouring,
}

/// Label sets achievable after a deletion, before equalising.
struct Colouring {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Colouring {
    fn value(&self) -> usize {
        self.left.len().min(self.right.len())
    }
}

/// Colours the components of `g - cut` left or right to maximise the
/// smaller number of labels all of whose remaining occurrences lie in
/// components of their own colour. Labels that occur only inside `cut`
/// are kept by both colourings.
fn colour(g: &UGraph, labels: &[Option<Label>], cut: &[bool]) -> Colouring {
    let n = g.n();
    let (comp, kc) = g.components_without(cut);
    let mut ids: BTreeMap<Label, usize> = BTreeMap::new();
    for l in labels.iter().flatten() {
        let next = ids.len();
        ids.entry(*l).or_insert(next);
    }
    let is_left: Vec<bool> = {
        let mut v = vec![false; ids.len()];
        for (l, &i) in &ids {
            v[i] = matches!(l, Label::Left(_));
        }
        v
    };
    // distinct labels per component
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); kc];
    for v in 0..n {
        if let (false, Some(l)) = (cut[v], labels[v]) {
            members[comp[v]].push(ids[&l]);
        }
    }
    for m in &mut members {
        m.sort_unstable();
        m.dedup();
    }
    // start with every component right: right labels are all kept
    let mut colour_left = vec![false; kc];
    let mut against = vec![0usize; ids.len()];
    for m in &members {
        for &l in m {
            if is_left[l] {
                against[l] += 1;
            }
        }
    }
    let mut kept = [0usize; 2];
    for l in 0..ids.len() {
        if against[l] == 0 {
            kept[usize::from(!is_left[l])] += 1;
        }
    }
    let flip =
        |c: usize, colour_left: &mut [bool], against: &mut [usize], kept: &mut [usize; 2]| {
            let to_left = !colour_left[c];
            colour_left[c] = to_left;
            for &l in &members[c] {
                let side = usize::from(!is_left[l]);
                // a component of the label's own colour stops counting against it
                if is_left[l] == to_left {
                    against[l] -= 1;
                    if against[l] == 0 {
                        kept[side] += 1;
                    }
                } else {
                    if against[l] == 0 {
                        kept[side] -= 1;
                    }
                    against[l] += 1;
                }
            }
        };
    let mut order: Vec<usize> = (0..kc).collect();
    let bias = |c: usize| {
        let l = members[c].iter().filter(|&&x| is_left[x]).count() as i64;
        l - (members[c].len() as i64 - l)
    };
    order.sort_by_key(|&c| (core::cmp::Reverse(bias(c)), c));
    let mut best = (kept[0].min(kept[1]), 0usize);
    for (i, &c) in order.iter().enumerate() {
        flip(c, &mut colour_left, &mut against, &mut kept);
        let v = kept[0].min(kept[1]);
        if v > best.0 {
            best = (v, i + 1);
        }
    }
    // rewind to the best prefix, then improve by single flips
    for &c in order.iter().skip(best.1).rev() {
        flip(c, &mut colour_left, &mut against, &mut kept);
    }
    for _ in 0..8 {
        let mut improved = false;
        for c in 0..kc {
            let before = kept[0].min(kept[1]);
            flip(c, &mut colour_left, &mut against, &mut kept);
            if kept[0].min(kept[1]) > before {
                improved = true;
            } else {
                flip(c, &mut colour_left, &mut against, &mut kept);
            }
        }
        if !improved {
            break;
        }
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (l, &i) in &ids {
        if against[i] == 0 {
            match l {
                Label::Left(x) => left.push(*x),
                Label::Right(x) => right.push(*x),
            }
        }
    }
    Colouring { left, right }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::{grid_graph, star_graph};

    #[test]
    fn star_deletes_the_center() {
        let s = 6;
        let g = star_graph(2 * s);
        let mut labels = vec![None; 2 * s + 1];
        for i in 0..s {
            labels[1 + i] = Some(Label::Left(i));
            labels[1 + s + i] = Some(Label::Right(i));
        }
        let r = turan_partition(&g, &labels, 1).unwrap();
        assert!(r.removed.iter().all(|&v| v == 0));
        assert_eq!(r.z0.len(), s);
        assert_eq!(r.z0p.len(), s);
    }

    #[test]
    fn bridge_endpoint() {
        // two 3x3 grids joined by the edge 8 - 9
        let mut e: Vec<(usize, usize)> = grid_graph(3, 3).edges().to_vec();
        e.extend(
            grid_graph(3, 3)
                .edges()
                .iter()
                .map(|&(u, v)| (u + 9, v + 9)),
        );
        e.push((8, 9));
        let g = UGraph::simple(18, e);
        let mut labels = vec![None; 18];
        for i in 0..4 {
            labels[i] = Some(Label::Left(i));
            labels[10 + i] = Some(Label::Right(i));
        }
        labels[14] = Some(Label::Right(4));
        let r = turan_partition(&g, &labels, 1).unwrap();
        assert_eq!(r.removed.len(), 1);
        assert!(r.removed[0] == 8 || r.removed[0] == 9);
        assert_eq!(r.z0, vec![0, 1, 2, 3]);
        assert_eq!(r.z0p, vec![0, 1, 2, 3]);
        assert_eq!(r.strategy, TuranStrategy::MinCut);
    }

    #[test]
    fn occurrence_bound() {
        let g = star_graph(2);
        let labels = vec![None, Some(Label::Left(0)), Some(Label::Left(0))];
        assert!(matches!(
            turan_partition(&g, &labels, 1),
            Err(SeparatorError::Occurrences {
                label: Label::Left(0),
                count: 2,
                k: 1
            })
        ));
    }

    #[test]
    fn shared_vertex_labels_need_deletion() {
        let g = UGraph::simple(2, [(0, 1)]);
        let labels = vec![Some(Label::Left(0)), Some(Label::Right(0))];
        let r = turan_partition(&g, &labels, 1).unwrap();
        assert_eq!(r.removed.len(), 1);
        assert_eq!(r.z0.len(), 1);
    }
}
