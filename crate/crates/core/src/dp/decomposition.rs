//! Heuristic branch decompositions.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EmbeddedMultigraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NodeKind {
    Leaf(EdgeId),
    Inner(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BdNode {
    pub kind: NodeKind,
    /// Sorted vertices shared between this subtree's edges and the rest.
    pub separator: Vec<VertexId>,
}

/// Rooted binary decomposition tree. Nodes are stored children-first; the
/// last node is the root and covers every edge (its separator is empty).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchDecomposition {
    pub nodes: Vec<BdNode>,
    pub width: usize,
}

impl BranchDecomposition {
    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Edges below each node.
    pub fn edge_sets(&self) -> Vec<Vec<EdgeId>> {
        let mut sets: Vec<Vec<EdgeId>> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let s = match node.kind {
                NodeKind::Leaf(e) => vec![e],
                NodeKind::Inner(a, b) => {
                    let mut s = sets[a].clone();
                    s.extend_from_slice(&sets[b]);
                    s
                }
            };
            sets.push(s);
        }
        sets
    }

    /// Checks the leaf bijection, the child-first order and every separator.
    pub fn validate(&self, g: &EmbeddedMultigraph) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidQuery(format!("invalid branch decomposition: {msg}")));
        if self.nodes.is_empty() {
            return if g.num_edges() == 0 { Ok(()) } else { bad("no nodes".into()) };
        }
        let mut seen = vec![false; g.num_edges()];
        let mut used = vec![false; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            match node.kind {
                NodeKind::Leaf(e) => {
                    if e >= g.num_edges() || seen[e] {
                        return bad(format!("edge {e} missing or repeated"));
                    }
                    seen[e] = true;
                }
                NodeKind::Inner(a, b) => {
                    if a >= i || b >= i || a == b || used[a] || used[b] {
                        return bad(format!("node {i} has bad children"));
                    }
                    used[a] = true;
                    used[b] = true;
                }
            }
        }
        if seen.iter().any(|s| !s) || used[..self.nodes.len() - 1].iter().any(|u| !u) {
            return bad("not a single tree over all edges".into());
        }
        let sets = self.edge_sets();
        let mut width = 0;
        for (i, set) in sets.iter().enumerate() {
            let sep = separator(g, set);
            if sep != self.nodes[i].separator {
                return bad(format!("separator of node {i} is wrong"));
            }
            if i != self.root() {
                width = width.max(sep.len());
            }
        }
        if width != self.width {
            return bad(format!("recorded width {} but actual {}", self.width, width));
        }
        Ok(())
    }
}

/// Vertices incident to edges both inside and outside `set`.
pub fn separator(g: &EmbeddedMultigraph, set: &[EdgeId]) -> Vec<VertexId> {
    let mut cnt = vec![0usize; g.num_vertices()];
    for &e in set {
        let (a, b) = g.endpoints(e);
        cnt[a] += 1;
        cnt[b] += 1;
    }
    (0..g.num_vertices()).filter(|&v| cnt[v] > 0 && cnt[v] < g.degree(v)).collect()
}

#[derive(Clone, Copy, Debug)]
pub struct DecomposeOptions {
    pub width_cap: usize,
    pub seed: u64,
    pub restarts: usize,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions { width_cap: 8, seed: 0, restarts: 8 }
    }
}

struct Builder {
    nodes: Vec<BdNode>,
}

impl Builder {
    // separators are filled in by `finish`
    fn leaf(&mut self, e: EdgeId) -> usize {
        self.nodes.push(BdNode { kind: NodeKind::Leaf(e), separator: Vec::new() });
        self.nodes.len() - 1
    }
}

fn finish(g: &EmbeddedMultigraph, mut nodes: Vec<BdNode>) -> BranchDecomposition {
    let sets = BranchDecomposition { nodes: nodes.clone(), width: 0 }.edge_sets();
    for (i, set) in sets.iter().enumerate() {
        nodes[i].separator = separator(g, set);
    }
    let width = nodes[..nodes.len() - 1].iter().map(|n| n.separator.len()).max().unwrap_or(0);
    BranchDecomposition { nodes, width }
}

/// Caterpillar over the given edge order.
fn sweep(g: &EmbeddedMultigraph, order: &[EdgeId]) -> BranchDecomposition {
    let mut b = Builder { nodes: Vec::new() };
    let mut cur = b.leaf(order[0]);
    for &e in &order[1..] {
        let l = b.leaf(e);
        b.nodes.push(BdNode { kind: NodeKind::Inner(cur, l), separator: Vec::new() });
        cur = b.nodes.len() - 1;
    }
    finish(g, b.nodes)
}

/// Edges ordered by breadth-first discovery from `start`.
fn bfs_order(g: &EmbeddedMultigraph, start: VertexId) -> Vec<EdgeId> {
    let mut seen_v = vec![false; g.num_vertices()];
    let mut seen_e = vec![false; g.num_edges()];
    let mut order = Vec::with_capacity(g.num_edges());
    let mut starts = vec![start];
    starts.extend(0..g.num_vertices());
    for s in starts {
        if seen_v[s] {
            continue;
        }
        seen_v[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &d in g.rotation(v) {
                let e = d >> 1;
                if !seen_e[e] {
                    seen_e[e] = true;
                    order.push(e);
                }
                let w = g.head(d);
                if !seen_v[w] {
                    seen_v[w] = true;
                    q.push_back(w);
                }
            }
        }
    }
    order
}

/// Bottom-up merging of clusters that share a vertex, preferring the merge
/// with the smallest resulting separator.
fn greedy(g: &EmbeddedMultigraph, rng: &mut ChaCha8Rng) -> BranchDecomposition {
    let n = g.num_vertices();
    let m = g.num_edges();
    let mut b = Builder { nodes: Vec::new() };
    // cluster id -> (node index, per-vertex edge counts, edge count)
    let mut clusters: Vec<Option<(usize, Vec<usize>, usize)>> = Vec::with_capacity(2 * m);
    for e in 0..m {
        let node = b.leaf(e);
        let mut cnt = vec![0usize; n];
        let (a, c) = g.endpoints(e);
        cnt[a] += 1;
        cnt[c] += 1;
        clusters.push(Some((node, cnt, 1)));
    }
    let noise: Vec<u32> = (0..2 * m).map(|_| rng.gen()).collect();
    let mut alive: Vec<usize> = (0..m).collect();
    while alive.len() > 1 {
        let mut best: Option<((usize, usize, u32), usize, usize)> = None;
        for (x, &i) in alive.iter().enumerate() {
            for &j in &alive[x + 1..] {
                let (_, ci, si) = clusters[i].as_ref().unwrap();
                let (_, cj, sj) = clusters[j].as_ref().unwrap();
                if !(0..n).any(|v| ci[v] > 0 && cj[v] > 0) {
                    continue;
                }
                let mut bnd = 0;
                for v in 0..n {
                    let c = ci[v] + cj[v];
                    if c > 0 && c < g.degree(v) {
                        bnd += 1;
                    }
                }
                let key = (bnd, si + sj, noise[i] ^ noise[j]);
                if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                    best = Some((key, i, j));
                }
            }
        }
        let (i, j) = match best {
            Some((_, i, j)) => (i, j),
            // disconnected: merge the two smallest clusters
            None => {
                let mut by_size = alive.clone();
                by_size.sort_by_key(|&c| (clusters[c].as_ref().unwrap().2, c));
                (by_size[0], by_size[1])
            }
        };
        let (ni, ci, si) = clusters[i].take().unwrap();
        let (nj, cj, sj) = clusters[j].take().unwrap();
        let cnt: Vec<usize> = ci.iter().zip(&cj).map(|(a, b)| a + b).collect();
        b.nodes.push(BdNode { kind: NodeKind::Inner(ni, nj), separator: Vec::new() });
        clusters.push(Some((b.nodes.len() - 1, cnt, si + sj)));
        let id = clusters.len() - 1;
        alive.retain(|&c| c != i && c != j);
        alive.push(id);
    }
    finish(g, b.nodes)
}

/// Greedy merging costs O(m^3 n); larger inputs only get sweeps.
const GREEDY_EDGE_LIMIT: usize = 90;

/// Best decomposition found by greedy merging (with seeded restarts) and
/// breadth-first sweeps; fails if its width exceeds `width_cap`.
pub fn decompose(g: &EmbeddedMultigraph, opts: DecomposeOptions) -> Result<BranchDecomposition> {
    let m = g.num_edges();
    if m == 0 {
        return Ok(BranchDecomposition { nodes: Vec::new(), width: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best = sweep(g, &bfs_order(g, 0));
    let mut starts: Vec<VertexId> = (0..g.num_vertices()).filter(|&v| g.degree(v) > 0).collect();
    starts.shuffle(&mut rng);
    starts.truncate(opts.restarts.max(1) * 2);
    for s in starts {
        let cand = sweep(g, &bfs_order(g, s));
        if cand.width < best.width {
            best = cand;
        }
    }
    // greedy merging is cubic in the edge count; skip it on big inputs
    if m <= GREEDY_EDGE_LIMIT {
        for _ in 0..opts.restarts.max(1) {
            let cand = greedy(g, &mut rng);
            if cand.width < best.width {
                best = cand;
            }
        }
    }
    if best.width > opts.width_cap {
        return Err(Error::WidthCap { found: best.width, cap: opts.width_cap });
    }
    Ok(best)
}
