//! Unit vertex-capacity max-flow by BFS augmenting paths on the split graph
//! (`v_in = 2v`, `v_out = 2v + 1`, super source and sink at the end).

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

/// Vertex-disjoint paths and a minimum vertex cut of the same size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct FlowOutcome {
    pub paths: Vec<Vec<usize>>,
    pub cut: Vec<usize>,
}

struct Net {
    head: Vec<usize>,
    cap: Vec<u32>,
    out: Vec<Vec<usize>>,
}

impl Net {
    fn new(nodes: usize) -> Self {
        Net {
            head: Vec::new(),
            cap: Vec::new(),
            out: vec![Vec::new(); nodes],
        }
    }

    fn arc(&mut self, a: usize, b: usize, cap: u32) {
        self.out[a].push(self.head.len());
        self.head.push(b);
        self.cap.push(cap);
        self.out[b].push(self.head.len());
        self.head.push(a);
        self.cap.push(0);
    }

    /// One BFS augmentation; false when the sink is unreachable.
    fn augment(&mut self, s: usize, t: usize, via: &mut [usize]) -> bool {
        via.fill(usize::MAX);
        let mut queue = VecDeque::from([s]);
        via[s] = usize::MAX - 1;
        while let Some(x) = queue.pop_front() {
            for &a in &self.out[x] {
                let y = self.head[a];
                if self.cap[a] > 0 && via[y] == usize::MAX {
                    via[y] = a;
                    if y == t {
                        let mut z = t;
                        while z != s {
                            let a = via[z];
                            self.cap[a] -= 1;
                            self.cap[a ^ 1] += 1;
                            z = self.head[a ^ 1];
                        }
                        return true;
                    }
                    queue.push_back(y);
                }
            }
        }
        false
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &a in &self.out[x] {
                let y = self.head[a];
                if self.cap[a] > 0 && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }
}

/// Maximum set of vertex-disjoint directed paths from `sources` to `sinks`
/// in a graph on `0..n`; every vertex, endpoints included, has capacity 1.
pub(crate) fn vertex_disjoint(
    n: usize,
    arcs: &[(usize, usize)],
    sources: &[usize],
    sinks: &[usize],
) -> FlowOutcome {
    let (s, t) = (2 * n, 2 * n + 1);
    let mut net = Net::new(2 * n + 2);
    for v in 0..n {
        net.arc(2 * v, 2 * v + 1, 1);
    }
    let big = u32::try_from(n + 1).unwrap_or(u32::MAX);
    for &(a, b) in arcs {
        net.arc(2 * a + 1, 2 * b, big);
    }
    let mut is_src = vec![false; n];
    for &v in sources {
        if !is_src[v] {
            is_src[v] = true;
            net.arc(s, 2 * v, 1);
        }
    }
    let mut is_snk = vec![false; n];
    for &v in sinks {
        if !is_snk[v] {
            is_snk[v] = true;
            net.arc(2 * v + 1, t, 1);
        }
    }
    let mut via = vec![usize::MAX; 2 * n + 2];
    while net.augment(s, t, &mut via) {}
    let seen = net.reachable(s);
    // arcs from the reachable side to the rest: internal, source or sink arcs
    let cut = (0..n)
        .filter(|&v| {
            (seen[2 * v] && !seen[2 * v + 1])
                || (is_src[v] && !seen[2 * v])
                || (is_snk[v] && seen[2 * v + 1])
        })
        .collect();
    // decompose: follow saturated forward arcs (original capacity minus residual)
    let mut used: Vec<u32> = vec![0; net.head.len()];
    for a in (0..net.head.len()).step_by(2) {
        used[a] = net.cap[a + 1];
    }
    let mut paths = Vec::new();
    loop {
        let Some(&a0) = net.out[s].iter().find(|&&a| a % 2 == 0 && used[a] > 0) else {
            break;
        };
        used[a0] -= 1;
        let mut x = net.head[a0];
        let mut path = Vec::new();
        while x != t {
            if x.is_multiple_of(2) && x < 2 * n {
                path.push(x / 2);
            }
            let a = *net.out[x]
                .iter()
                .find(|&&a| a % 2 == 0 && used[a] > 0)
                .expect("flow conservation");
            used[a] -= 1;
            x = net.head[a];
        }
        paths.push(path);
    }
    FlowOutcome { paths, cut }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bottleneck_and_bipartite() {
        // 0,1 -> 2 -> 3,4
        let f = vertex_disjoint(5, &[(0, 2), (1, 2), (2, 3), (2, 4)], &[0, 1], &[3, 4]);
        assert_eq!(f.paths.len(), 1);
        assert_eq!(f.cut, vec![2]);
        let f = vertex_disjoint(4, &[(0, 2), (0, 3), (1, 2), (1, 3)], &[0, 1], &[2, 3]);
        assert_eq!(f.paths.len(), 2);
        assert_eq!(f.cut, vec![0, 1]);
    }

    #[test]
    fn shared_endpoint_is_a_path() {
        let f = vertex_disjoint(2, &[(0, 1)], &[0, 1], &[1]);
        assert_eq!(f.paths.len(), 1);
        assert_eq!(f.cut.len(), 1);
    }
}
