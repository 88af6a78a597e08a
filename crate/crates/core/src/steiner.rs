//! Steiner trees: metric-closure 2-approximation and an exact subset DP.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EmbeddedMultigraph, UnionFind, VertexId, Weight};

pub const DEFAULT_TERMINAL_CAP: usize = 12;
pub(crate) const INF: i64 = i64::MAX / 4;
const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerTree {
    /// Sorted edge ids.
    pub edges: Vec<EdgeId>,
    pub weight: Weight,
}

/// Single- or multi-source shortest paths over integer weights. Ties are
/// settled by smaller vertex id, and among parallel edges by smaller weight
/// then smaller edge id.
#[derive(Clone, Debug)]
pub struct ShortestPaths {
    pub dist: Vec<i64>,
    pub pred: Vec<Option<EdgeId>>,
}

impl ShortestPaths {
    pub fn reachable(&self, v: VertexId) -> bool {
        self.dist[v] < INF
    }

    /// Edges of the path from the source set to `t`, listed from `t` backwards.
    pub fn path_to(&self, g: &EmbeddedMultigraph, mut t: VertexId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        while let Some(e) = self.pred[t] {
            out.push(e);
            t = g.other_end(e, t);
        }
        out
    }

    /// Vertices of the path from the source set to `t`, in source-to-`t` order.
    pub fn vertex_path_to(&self, g: &EmbeddedMultigraph, t: VertexId) -> Vec<VertexId> {
        let mut vs = vec![t];
        let mut cur = t;
        while let Some(e) = self.pred[cur] {
            cur = g.other_end(e, cur);
            vs.push(cur);
        }
        vs.reverse();
        vs
    }
}

pub fn dijkstra(
    g: &EmbeddedMultigraph,
    w: &[i64],
    sources: &[(VertexId, i64)],
    allowed: Option<&[bool]>,
) -> ShortestPaths {
    let n = g.num_vertices();
    let mut dist = vec![INF; n];
    let mut pred: Vec<Option<EdgeId>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    for &(s, d0) in sources {
        if d0 < dist[s] {
            dist[s] = d0;
            heap.push(Reverse((d0, s)));
        }
    }
    while let Some(Reverse((d, v))) = heap.pop() {
        if done[v] || d > dist[v] {
            continue;
        }
        done[v] = true;
        for &dart in g.rotation(v) {
            let e = dart >> 1;
            if allowed.is_some_and(|a| !a[e]) {
                continue;
            }
            let x = g.head(dart);
            if done[x] {
                continue;
            }
            let nd = d + w[e];
            let better = nd < dist[x]
                || (nd == dist[x]
                    && pred[x].is_some_and(|p| {
                        let pv = g.other_end(p, x);
                        (v, w[e], e) < (pv, w[p], p)
                    }));
            if better {
                if nd < dist[x] {
                    heap.push(Reverse((nd, x)));
                }
                dist[x] = nd;
                pred[x] = Some(e);
            }
        }
    }
    ShortestPaths { dist, pred }
}

fn dedup_sorted(mut v: Vec<VertexId>) -> Vec<VertexId> {
    v.sort_unstable();
    v.dedup();
    v
}

fn check_terminals(g: &EmbeddedMultigraph, terminals: &[VertexId]) -> Result<()> {
    if let Some(&t) = terminals.iter().find(|&&t| t >= g.num_vertices()) {
        return Err(Error::InvalidQuery(format!("terminal {t} out of range")));
    }
    Ok(())
}

/// Minimum spanning forest of `edges` (by weight, then id) with non-terminal
/// leaves pruned repeatedly. Returns sorted edge ids.
pub fn tree_from_edges(
    g: &EmbeddedMultigraph,
    w: &[i64],
    edges: &[EdgeId],
    terminals: &[VertexId],
) -> Vec<EdgeId> {
    let mut es: Vec<EdgeId> = edges.to_vec();
    es.sort_unstable();
    es.dedup();
    es.sort_by_key(|&e| (w[e], e));
    let mut uf = UnionFind::new(g.num_vertices());
    let mut tree: Vec<EdgeId> = es
        .into_iter()
        .filter(|&e| {
            let (a, b) = g.endpoints(e);
            uf.union(a, b)
        })
        .collect();
    let mut is_term = vec![false; g.num_vertices()];
    for &t in terminals {
        is_term[t] = true;
    }
    loop {
        let mut deg = vec![0usize; g.num_vertices()];
        for &e in &tree {
            let (a, b) = g.endpoints(e);
            deg[a] += 1;
            deg[b] += 1;
        }
        let before = tree.len();
        tree.retain(|&e| {
            let (a, b) = g.endpoints(e);
            !((deg[a] == 1 && !is_term[a]) || (deg[b] == 1 && !is_term[b]))
        });
        if tree.len() == before {
            break;
        }
    }
    tree.sort_unstable();
    tree
}

fn finish(g: &EmbeddedMultigraph, edges: Vec<EdgeId>) -> SteinerTree {
    let weight = g.weight_of(edges.iter().copied());
    SteinerTree { edges, weight }
}

/// Metric-closure MST, expanded to graph paths, re-spanned and pruned.
pub fn approx_steiner(g: &EmbeddedMultigraph, terminals: &[VertexId]) -> Result<SteinerTree> {
    check_terminals(g, terminals)?;
    let terms = dedup_sorted(terminals.to_vec());
    if terms.len() <= 1 {
        return Ok(finish(g, Vec::new()));
    }
    let (w, _) = g.scaled_weights();
    let sp: Vec<ShortestPaths> = terms.iter().map(|&t| dijkstra(g, &w, &[(t, 0)], None)).collect();
    let mut pairs = Vec::new();
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            let d = sp[i].dist[terms[j]];
            if d >= INF {
                return Err(Error::Disconnected(format!(
                    "terminals {} and {} lie in different components",
                    terms[i], terms[j]
                )));
            }
            pairs.push((d, i, j));
        }
    }
    pairs.sort_unstable();
    let mut uf = UnionFind::new(terms.len());
    let mut union = Vec::new();
    for (_, i, j) in pairs {
        if uf.union(i, j) {
            union.extend(sp[i].path_to(g, terms[j]));
        }
    }
    Ok(finish(g, tree_from_edges(g, &w, &union, &terms)))
}

/// Minimum-weight Steiner tree; at most `cap` distinct terminals.
pub fn exact_steiner(g: &EmbeddedMultigraph, terminals: &[VertexId], cap: usize) -> Result<SteinerTree> {
    check_terminals(g, terminals)?;
    let terms = dedup_sorted(terminals.to_vec());
    if terms.len() > cap {
        return Err(Error::TerminalCap { found: terms.len(), cap });
    }
    if terms.len() <= 1 {
        return Ok(finish(g, Vec::new()));
    }
    let (w, _) = g.scaled_weights();
    let all: Vec<EdgeId> = (0..g.num_edges()).collect();
    let table = SubsetTable::build(g, &w, &all, &terms, SplitRule::All)?;
    let full = (1u32 << (terms.len() - 1)) - 1;
    let edges = table.tree(full).ok_or_else(|| Error::Disconnected("terminals lie in different components".into()))?;
    Ok(finish(g, tree_from_edges(g, &w, &edges, &terms)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitRule {
    /// Every bipartition of the terminal subset.
    All,
    /// Terminals lie on one face in the given cyclic order; only splits into
    /// two cyclic intervals are tried.
    CyclicIntervals,
}

/// Subset DP over terminals `terms[0..t-1]`, rooted at `terms[t-1]`.
/// `tree(mask)` is an optimal tree spanning the masked terminals plus the root.
pub struct SubsetTable<'g> {
    g: &'g EmbeddedMultigraph,
    terms: Vec<VertexId>,
    local: Vec<usize>,
    verts: Vec<VertexId>,
    adj: Vec<Vec<(usize, EdgeId, i64)>>,
    dp: Vec<i64>,
    pred: Vec<u32>,
    split: Vec<u32>,
}

/// Largest `2^(t-1) * vertices` table the DP will allocate.
pub const SUBSET_TABLE_LIMIT: usize = 1 << 25;

impl<'g> SubsetTable<'g> {
    /// Builds the table over the subgraph formed by `edges`.
    pub fn build(
        g: &'g EmbeddedMultigraph,
        w: &[i64],
        edges: &[EdgeId],
        terms: &[VertexId],
        rule: SplitRule,
    ) -> Result<Self> {
        assert!(!terms.is_empty() && terms.len() <= 31);
        let mut local = vec![usize::MAX; g.num_vertices()];
        let mut verts = Vec::new();
        let mut touch = |v: VertexId, verts: &mut Vec<VertexId>| {
            if local[v] == usize::MAX {
                local[v] = verts.len();
                verts.push(v);
            }
        };
        for &t in terms {
            touch(t, &mut verts);
        }
        for &e in edges {
            let (a, b) = g.endpoints(e);
            touch(a, &mut verts);
            touch(b, &mut verts);
        }
        let n = verts.len();
        let mut adj = vec![Vec::new(); n];
        for &e in edges {
            let (a, b) = g.endpoints(e);
            let (la, lb) = (local[a], local[b]);
            adj[la].push((lb, e, w[e]));
            adj[lb].push((la, e, w[e]));
        }
        let t = terms.len();
        let masks = 1usize << (t - 1);
        if masks.saturating_mul(n) > SUBSET_TABLE_LIMIT {
            return Err(Error::SizeCap(format!("subset table of {masks} x {n} entries")));
        }
        let mut table = SubsetTable {
            g,
            terms: terms.to_vec(),
            local,
            verts,
            adj,
            dp: vec![INF; masks * n],
            pred: vec![NONE; masks * n],
            split: vec![0; masks * n],
        };
        table.fill(rule);
        Ok(table)
    }

    fn fill(&mut self, rule: SplitRule) {
        let n = self.verts.len();
        let t = self.terms.len();
        let masks = 1usize << (t - 1);
        let mut f = vec![INF; n];
        let mut best_split = vec![0u32; n];
        for mask in 1..masks {
            f.iter_mut().for_each(|x| *x = INF);
            if mask.count_ones() == 1 {
                let i = mask.trailing_zeros() as usize;
                f[self.local[self.terms[i]]] = 0;
            } else {
                for s1 in splits(mask as u32, rule) {
                    let s2 = mask as u32 ^ s1;
                    let (a, b) = (s1 as usize * n, s2 as usize * n);
                    for u in 0..n {
                        let c = self.dp[a + u].saturating_add(self.dp[b + u]);
                        if c < f[u] {
                            f[u] = c;
                            best_split[u] = s1;
                        }
                    }
                }
            }
            // multi-source Dijkstra seeded with f
            let base = mask * n;
            let mut heap = BinaryHeap::new();
            for u in 0..n {
                if f[u] < INF {
                    self.dp[base + u] = f[u];
                    self.split[base + u] = best_split[u];
                    heap.push(Reverse((f[u], self.verts[u], u)));
                }
            }
            let mut done = vec![false; n];
            while let Some(Reverse((d, _, u))) = heap.pop() {
                if done[u] || d > self.dp[base + u] {
                    continue;
                }
                done[u] = true;
                for &(x, e, we) in &self.adj[u] {
                    let nd = d + we;
                    if !done[x] && nd < self.dp[base + x] {
                        self.dp[base + x] = nd;
                        self.pred[base + x] = e as u32;
                        heap.push(Reverse((nd, self.verts[x], x)));
                    }
                }
            }
        }
    }

    pub fn terminals(&self) -> &[VertexId] {
        &self.terms
    }

    /// Cost of the optimal tree spanning `mask` plus the root (scaled weight).
    pub fn cost(&self, mask: u32) -> Option<i64> {
        if mask == 0 {
            return Some(0);
        }
        let n = self.verts.len();
        let root = self.local[*self.terms.last().unwrap()];
        let c = self.dp[mask as usize * n + root];
        (c < INF).then_some(c)
    }

    /// Edges (possibly with overlaps removed) of an optimal tree for `mask` plus the root.
    pub fn tree(&self, mask: u32) -> Option<Vec<EdgeId>> {
        self.cost(mask)?;
        let mut out = Vec::new();
        if mask != 0 {
            let root = self.local[*self.terms.last().unwrap()];
            self.collect(mask, root, &mut out);
        }
        out.sort_unstable();
        out.dedup();
        Some(out)
    }

    /// Where the tree for a set of terminals (bit `i` = `terms[i]`, all
    /// `t` bits) is stored: the set minus one member, grown from that member.
    fn locate(&self, set: u32) -> (u32, usize) {
        let t = self.terms.len();
        if set >> (t - 1) & 1 == 1 {
            (set ^ (1 << (t - 1)), self.local[self.terms[t - 1]])
        } else {
            let top = 31 - set.leading_zeros() as usize;
            (set ^ (1 << top), self.local[self.terms[top]])
        }
    }

    /// Cost of an optimal tree spanning an arbitrary terminal subset.
    pub fn span_cost(&self, set: u32) -> Option<i64> {
        if set.count_ones() <= 1 {
            return Some(0);
        }
        let (mask, v) = self.locate(set);
        let c = self.dp[mask as usize * self.verts.len() + v];
        (c < INF).then_some(c)
    }

    /// Edges of an optimal tree spanning an arbitrary terminal subset.
    pub fn span_tree(&self, set: u32) -> Option<Vec<EdgeId>> {
        self.span_cost(set)?;
        let mut out = Vec::new();
        if set.count_ones() > 1 {
            let (mask, v) = self.locate(set);
            self.collect(mask, v, &mut out);
        }
        out.sort_unstable();
        out.dedup();
        Some(out)
    }

    fn collect(&self, mask: u32, mut v: usize, out: &mut Vec<EdgeId>) {
        let n = self.verts.len();
        loop {
            let p = self.pred[mask as usize * n + v];
            if p == NONE {
                break;
            }
            let e = p as EdgeId;
            out.push(e);
            v = self.local[self.g.other_end(e, self.verts[v])];
        }
        if mask.count_ones() == 1 {
            return;
        }
        let s1 = self.split[mask as usize * n + v];
        self.collect(s1, v, out);
        self.collect(mask ^ s1, v, out);
    }
}

/// Candidate first parts `s1` of a split of `mask`; each contains the lowest bit.
fn splits(mask: u32, rule: SplitRule) -> Vec<u32> {
    let low = mask & mask.wrapping_neg();
    match rule {
        SplitRule::All => {
            let mut out = Vec::new();
            let rest = mask ^ low;
            // every proper subset of `rest`, joined with the lowest bit
            let mut sub = rest;
            loop {
                if sub != rest {
                    out.push(sub | low);
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
            out
        }
        SplitRule::CyclicIntervals => {
            let members: Vec<u32> = (0..32).filter(|i| mask >> i & 1 == 1).collect();
            let m = members.len();
            let mut out = Vec::new();
            for start in 0..m {
                let mut s = 0u32;
                for len in 1..m {
                    s |= 1 << members[(start + len - 1) % m];
                    if s & low != 0 {
                        out.push(s);
                    }
                }
            }
            out.sort_unstable();
            out.dedup();
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn is_tree_spanning(g: &EmbeddedMultigraph, edges: &[EdgeId], terms: &[VertexId]) -> bool {
        let mut uf = UnionFind::new(g.num_vertices());
        for &e in edges {
            let (a, b) = g.endpoints(e);
            if !uf.union(a, b) {
                return false;
            }
        }
        terms.windows(2).all(|p| uf.find(p[0]) == uf.find(p[1]))
    }

    /// Exhaustive minimum over all edge subsets that connect the terminals.
    fn brute_force(g: &EmbeddedMultigraph, terms: &[VertexId]) -> Weight {
        let m = g.num_edges();
        let mut best = g.total_weight();
        for mask in 0u32..(1 << m) {
            let mut uf = UnionFind::new(g.num_vertices());
            let mut w = Weight::from_integer(0);
            for e in 0..m {
                if mask >> e & 1 == 1 {
                    let (a, b) = g.endpoints(e);
                    uf.union(a, b);
                    w += g.weight(e);
                }
            }
            if w < best && terms.windows(2).all(|p| uf.find(p[0]) == uf.find(p[1])) {
                best = w;
            }
        }
        best
    }

    #[test]
    fn trivial_cases() {
        let g = grid(3, 3);
        assert_eq!(exact_steiner(&g, &[4], 12).unwrap().weight, Weight::from_integer(0));
        assert_eq!(approx_steiner(&g, &[0, 8]).unwrap().weight, Weight::from_integer(4));
        assert_eq!(exact_steiner(&g, &[0, 8], 12).unwrap().weight, Weight::from_integer(4));
        // star: wheel spokes cheaper than the rim
        let star = wheel_with(4, |u, v| Weight::from_integer(if u.max(v) == 4 { 1 } else { 5 }));
        let t = approx_steiner(&star, &[0, 1, 2, 3]).unwrap();
        assert_eq!(t.weight, Weight::from_integer(4));
        assert!(exact_steiner(&g, &(0..9).collect::<Vec<_>>(), 4).is_err());
    }

    #[test]
    fn cycle_three_terminals() {
        let g = cycle(4);
        let exact = exact_steiner(&g, &[0, 1, 2], 12).unwrap();
        assert_eq!(exact.weight, Weight::from_integer(2));
        let approx = approx_steiner(&g, &[0, 1, 2]).unwrap();
        assert!(approx.weight <= exact.weight * Weight::from_integer(2));
    }

    #[test]
    fn grid_corners_match_brute_force() {
        let g = grid(3, 3);
        let terms = [0, 2, 6, 8];
        let bf = brute_force(&g, &terms);
        assert_eq!(bf, Weight::from_integer(6));
        assert_eq!(exact_steiner(&g, &terms, 12).unwrap().weight, bf);
    }

    #[test]
    fn disconnected_terminals() {
        let g = g_two_components();
        assert!(matches!(approx_steiner(&g, &[0, 3]), Err(Error::Disconnected(_))));
        assert!(matches!(exact_steiner(&g, &[0, 3], 12), Err(Error::Disconnected(_))));
    }

    fn g_two_components() -> EmbeddedMultigraph {
        let w = Weight::from_integer(1);
        EmbeddedMultigraph::build(4, vec![(0, 1, w), (2, 3, w)], vec![vec![0], vec![1], vec![2], vec![3]]).unwrap()
    }

    #[test]
    fn interval_rule_matches_full_rule_on_outer_face() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let rows = rng.gen_range(2..5);
            let cols = rng.gen_range(2..5);
            let g = randomize_weights(&grid(rows, cols), 1, 9, &mut rng);
            // boundary in cyclic order
            let mut ring = Vec::new();
            ring.extend((0..cols).map(|c| c));
            ring.extend((1..rows).map(|r| r * cols + cols - 1));
            ring.extend((0..cols - 1).rev().map(|c| (rows - 1) * cols + c));
            ring.extend((1..rows - 1).rev().map(|r| r * cols));
            let terms: Vec<VertexId> = ring.into_iter().filter(|_| rng.gen_bool(0.6)).collect();
            if terms.len() < 2 {
                continue;
            }
            let (w, _) = g.scaled_weights();
            let all: Vec<EdgeId> = (0..g.num_edges()).collect();
            let a = SubsetTable::build(&g, &w, &all, &terms, SplitRule::All).unwrap();
            let b = SubsetTable::build(&g, &w, &all, &terms, SplitRule::CyclicIntervals).unwrap();
            for mask in 0..(1u32 << (terms.len() - 1)) {
                assert_eq!(a.cost(mask), b.cost(mask));
                let tree = b.tree(mask).unwrap();
                let mut spanned: Vec<VertexId> = (0..terms.len() - 1).filter(|i| mask >> i & 1 == 1).map(|i| terms[i]).collect();
                spanned.push(*terms.last().unwrap());
                let cleaned = tree_from_edges(&g, &w, &tree, &spanned);
                let cost: i64 = cleaned.iter().map(|&e| w[e]).sum();
                assert_eq!(Some(cost), b.cost(mask));
                assert!(is_tree_spanning(&g, &cleaned, &spanned));
            }
        }
    }

    #[test]
    fn span_queries_cover_every_subset() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = randomize_weights(&grid(3, 4), 1, 7, &mut rng);
        let (w, _) = g.scaled_weights();
        let all: Vec<EdgeId> = (0..g.num_edges()).collect();
        let terms = [0, 3, 5, 11, 8];
        let t = SubsetTable::build(&g, &w, &all, &terms, SplitRule::All).unwrap();
        for set in 1u32..(1 << terms.len()) {
            let sub: Vec<VertexId> = (0..terms.len()).filter(|i| set >> i & 1 == 1).map(|i| terms[i]).collect();
            let want = exact_steiner(&g, &sub, 12).unwrap().weight;
            assert_eq!(Weight::from_integer(t.span_cost(set).unwrap()), want);
            let tree = t.span_tree(set).unwrap();
            let cleaned = tree_from_edges(&g, &w, &tree, &sub);
            assert_eq!(g.weight_of(cleaned.iter().copied()), want);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn approx_within_twice_exact(seed in 0u64..100_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(3..=12);
            let g = random_triangulation(n, 1, 10, &mut rng);
            let g = thin_connected(&g, 0.4, &mut rng);
            let k = rng.gen_range(1..=5.min(n));
            let mut terms: Vec<VertexId> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(&mut terms[..], &mut rng);
            terms.truncate(k);
            let exact = exact_steiner(&g, &terms, 12).unwrap();
            let approx = approx_steiner(&g, &terms).unwrap();
            prop_assert!(approx.weight <= exact.weight * Weight::from_integer(2));
            prop_assert!(exact.weight <= approx.weight);
            let mut sorted = terms.clone();
            sorted.sort();
            prop_assert!(is_tree_spanning(&g, &exact.edges, &sorted));
            prop_assert!(is_tree_spanning(&g, &approx.edges, &sorted));
        }

        #[test]
        fn exact_matches_brute_force(seed in 0u64..100_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(3..=7);
            let g = random_triangulation(n, 1, 6, &mut rng);
            let g = thin_connected(&g, 0.3, &mut rng);
            let terms: Vec<VertexId> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            if terms.len() >= 2 {
                prop_assert_eq!(exact_steiner(&g, &terms, 12).unwrap().weight, brute_force(&g, &terms));
            }
        }
    }
}
