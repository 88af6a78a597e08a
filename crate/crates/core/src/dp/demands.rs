//! Edge-disjoint path demands on tiny multigraphs.

use std::collections::HashSet;

/// Edges of a small multigraph on vertices `0..n`; at most 128 edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SmallMultigraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl SmallMultigraph {
    pub fn new(n: usize) -> Self {
        SmallMultigraph { n, edges: Vec::new() }
    }

    pub fn add(&mut self, u: usize, v: usize, copies: u8) {
        for _ in 0..copies {
            self.edges.push((u, v));
        }
    }

    /// Maximum number of edge-disjoint `s`-`t` paths using edges in `free`.
    fn flow(&self, free: u128, s: usize, t: usize, limit: u32) -> u32 {
        let m = self.edges.len();
        // residual capacity per dart: 2e is u->v, 2e+1 is v->u
        let mut res = vec![0i8; 2 * m];
        for e in 0..m {
            if free >> e & 1 == 1 {
                res[2 * e] = 1;
                res[2 * e + 1] = 1;
            }
        }
        let mut flow = 0;
        while flow < limit {
            let mut pred = vec![usize::MAX; self.n];
            pred[s] = usize::MAX - 1;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                if x == t {
                    break;
                }
                for (e, &(a, b)) in self.edges.iter().enumerate() {
                    for (d, from, to) in [(2 * e, a, b), (2 * e + 1, b, a)] {
                        if from == x && res[d] > 0 && pred[to] == usize::MAX {
                            pred[to] = d;
                            stack.push(to);
                        }
                    }
                }
            }
            if pred[t] == usize::MAX {
                break;
            }
            let mut x = t;
            while x != s {
                let d = pred[x];
                res[d] -= 1;
                res[d ^ 1] += 1;
                let (a, b) = self.edges[d / 2];
                x = if d % 2 == 0 { a } else { b };
            }
            flow += 1;
        }
        flow
    }
}

struct Search<'a> {
    g: &'a SmallMultigraph,
    demands: Vec<(usize, usize, u8)>,
    failed: HashSet<(u128, usize, u8)>,
}

impl Search<'_> {
    fn run(&mut self, free: u128, i: usize, left: u8) -> bool {
        if i == self.demands.len() {
            return true;
        }
        if left == 0 {
            let next = self.demands.get(i + 1).map_or(0, |d| d.2);
            return self.run(free, i + 1, next);
        }
        if self.failed.contains(&(free, i, left)) {
            return false;
        }
        // every pending demand must still fit on its own
        let ok = (i..self.demands.len()).all(|j| {
            let (x, y, b) = self.demands[j];
            let need = if j == i { left } else { b } as u32;
            self.g.flow(free, x, y, need) >= need
        });
        if ok {
            let (x, y, _) = self.demands[i];
            let mut on_path = vec![false; self.g.n];
            on_path[x] = true;
            if self.extend(free, free, x, y, &mut on_path, i, left) {
                return true;
            }
        }
        self.failed.insert((free, i, left));
        false
    }

    /// Grows a simple path from `at` to `y` out of `free` edges; `rest` is
    /// the free set minus the path so far.
    #[allow(clippy::too_many_arguments)]
    fn extend(&mut self, free: u128, rest: u128, at: usize, y: usize, on_path: &mut [bool], i: usize, left: u8) -> bool {
        if at == y {
            return self.run(rest, i, left - 1);
        }
        let mut tried: Vec<(usize, usize)> = Vec::new();
        for (e, &(a, b)) in self.g.edges.iter().enumerate() {
            if rest >> e & 1 == 0 || (a != at && b != at) {
                continue;
            }
            let to = if a == at { b } else { a };
            // parallel copies are interchangeable; try the first free one only
            if on_path[to] || tried.contains(&(a, b)) {
                continue;
            }
            tried.push((a, b));
            on_path[to] = true;
            let found = self.extend(free, rest & !(1u128 << e), to, y, on_path, i, left);
            on_path[to] = false;
            if found {
                return true;
            }
        }
        false
    }
}

/// Decides whether `b` edge-disjoint paths exist between `x` and `y` for
/// every demand `(x, y, b)`, all paths being mutually edge-disjoint.
/// Exhaustive search with memoised failures and max-flow pruning.
pub fn alg_demands(g: &SmallMultigraph, demands: &[(usize, usize, u8)]) -> bool {
    assert!(g.edges.len() <= 128, "alg_demands supports at most 128 edges");
    let mut ds: Vec<(usize, usize, u8)> = demands.iter().copied().filter(|&(x, y, b)| x != y && b > 0).collect();
    // hardest demands first
    ds.sort_by(|a, b| b.2.cmp(&a.2).then(a.cmp(b)));
    let total: usize = ds.iter().map(|d| d.2 as usize).sum();
    if total > g.edges.len() {
        return false;
    }
    let free = if g.edges.len() == 128 { u128::MAX } else { (1u128 << g.edges.len()) - 1 };
    let first = ds.first().map_or(0, |d| d.2);
    let mut s = Search { g, demands: ds, failed: HashSet::new() };
    s.run(free, 0, first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k4() -> SmallMultigraph {
        let mut g = SmallMultigraph::new(4);
        for (a, b) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            g.add(a, b, 1);
        }
        g
    }

    #[test]
    fn examples() {
        let mut g = SmallMultigraph::new(2);
        g.add(0, 1, 1);
        assert!(alg_demands(&g, &[]));
        assert!(!alg_demands(&g, &[(0, 1, 2)]));
        assert!(alg_demands(&g, &[(0, 1, 1)]));
        assert!(alg_demands(&k4(), &[(0, 1, 2), (2, 3, 1)]));
        assert!(alg_demands(&k4(), &[(0, 1, 3)]));
        assert!(alg_demands(&k4(), &[(0, 1, 3), (2, 3, 1)]));
        assert!(!alg_demands(&k4(), &[(0, 1, 3), (2, 3, 2)]));
    }

    #[test]
    fn joint_demands_can_fail_where_single_ones_pass() {
        // path a - m - c: (a,m,1) and (m,c,1) fit together, (a,c,1) blocks both
        let mut g = SmallMultigraph::new(3);
        g.add(0, 1, 1);
        g.add(1, 2, 1);
        assert!(alg_demands(&g, &[(0, 1, 1), (1, 2, 1)]));
        assert!(!alg_demands(&g, &[(0, 2, 1), (0, 1, 1)]));
    }

    /// All ways of handing each edge to one demand (or none), then checking
    /// each demand's share by flow.
    fn brute(g: &SmallMultigraph, demands: &[(usize, usize, u8)]) -> bool {
        let m = g.edges.len();
        let d = demands.len();
        let mut assign = vec![0usize; m];
        loop {
            let ok = demands.iter().enumerate().all(|(j, &(x, y, b))| {
                let mask = (0..m).filter(|&e| assign[e] == j + 1).fold(0u128, |acc, e| acc | 1 << e);
                x == y || g.flow(mask, x, y, b as u32) >= b as u32
            });
            if ok {
                return true;
            }
            let mut i = 0;
            while i < m && assign[i] == d {
                assign[i] = 0;
                i += 1;
            }
            if i == m {
                return false;
            }
            assign[i] += 1;
        }
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            edges in prop::collection::vec((0usize..4, 0usize..4), 1..8),
            demands in prop::collection::vec((0usize..4, 0usize..4, 1u8..3), 1..3),
        ) {
            let mut g = SmallMultigraph::new(4);
            for (a, b) in edges {
                if a != b {
                    g.add(a, b, 1);
                }
            }
            prop_assert_eq!(alg_demands(&g, &demands), brute(&g, &demands));
        }
    }
}
