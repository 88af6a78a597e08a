//! Exact dynamic program over a branch decomposition.
//!
//! A table entry at node `q` summarises a choice of multiplicities on the
//! edges below `q` by its cut profile: for every subset `X` of the
//! separator `L` and every pair of requirement levels `(a, b)`, the least
//! cut capacity `h(X, a, b)` of a vertex set `S` (of the vertices touched
//! below `q`) with `S ∩ L = X`, some vertex of requirement `>= a` in `S`
//! and some vertex of requirement `>= b` outside it. Values are capped at
//! the largest requirement. Two partial solutions with the same profile
//! are interchangeable for every completion, so the table keeps one of
//! minimum weight per profile.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::decomposition::{BranchDecomposition, NodeKind};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, EmbeddedMultigraph, MultiSolution, RequirementMap, VertexId, Weight};

#[derive(Clone, Copy, Debug)]
pub struct DpOptions {
    /// Largest multiplicity tried per edge; `None` means `k`.
    pub leaf_max: Option<u8>,
    /// Drop entries that no completion can make feasible.
    pub connecting_filter: bool,
    /// Drop entries dominated by a cheaper entry with a pointwise larger profile.
    pub pareto: bool,
    /// Maximum number of entries kept at one node.
    pub entry_budget: usize,
    /// Maximum number of entry pairs examined at one node.
    pub pair_budget: u64,
    /// Keep every node's profiles after use (needed by [`DpTables::profile`]).
    pub keep_profiles: bool,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions {
            leaf_max: None,
            connecting_filter: true,
            pareto: true,
            entry_budget: 200_000,
            pair_budget: 200_000_000,
            keep_profiles: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Back {
    Leaf(u8),
    Pair(u32, u32),
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub profile: Vec<u8>,
    /// Weight scaled by [`DpTables::scale`].
    pub weight: i64,
    pub back: Back,
}

#[derive(Clone, Debug)]
pub struct NodeTable {
    pub separator: Vec<VertexId>,
    pub entries: Vec<Entry>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DpStats {
    pub width: usize,
    pub levels: Vec<u8>,
    pub entries_per_node: Vec<usize>,
    pub total_entries: usize,
    pub pairs_examined: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DpResult {
    pub weight: Weight,
    pub solution: MultiSolution,
    pub stats: DpStats,
}

/// All node tables of one run.
#[derive(Clone, Debug)]
pub struct DpTables {
    pub levels: Vec<u8>,
    pub cap: u8,
    pub scale: i64,
    pub nodes: Vec<NodeTable>,
    pub stats: DpStats,
    kinds: Vec<NodeKind>,
    m: usize,
}

fn index(nl: usize, x: usize, a: usize, b: usize) -> usize {
    (x * nl + a) * nl + b
}

/// Largest requirement in each vertex set given as a bitmask over `verts`.
fn max_req(verts: &[VertexId], r: &RequirementMap, set: u64) -> u8 {
    verts.iter().enumerate().filter(|(i, _)| set >> i & 1 == 1).map(|(_, &v)| r.get(v)).max().unwrap_or(0)
}

fn level_of(levels: &[u8], req: u8) -> usize {
    levels.iter().rposition(|&t| t <= req).unwrap()
}

/// Profile of a multiplicity vector restricted to `edges`, by enumerating
/// every vertex subset. Exponential; for tests and small spot checks.
pub fn brute_profile(
    g: &EmbeddedMultigraph,
    r: &RequirementMap,
    levels: &[u8],
    cap: u8,
    edges: &[EdgeId],
    separator: &[VertexId],
    mult: &[u8],
) -> Vec<u8> {
    let nl = levels.len();
    let mut verts: Vec<VertexId> = edges.iter().flat_map(|&e| [g.endpoints(e).0, g.endpoints(e).1]).collect();
    verts.sort_unstable();
    verts.dedup();
    assert!(verts.len() < 24, "brute_profile is exponential in the vertex count");
    let pos = |v: VertexId| verts.binary_search(&v).unwrap();
    let full = (1u64 << verts.len()) - 1;
    let mut out = vec![cap; (1 << separator.len()) * nl * nl];
    for s in 0..=full {
        let mut cut = 0u32;
        for &e in edges {
            let (a, b) = g.endpoints(e);
            if (s >> pos(a) & 1) != (s >> pos(b) & 1) {
                cut += mult[e] as u32;
            }
        }
        let cut = cut.min(cap as u32) as u8;
        let x = separator.iter().enumerate().filter(|(_, &v)| s >> pos(v) & 1 == 1).fold(0, |acc, (i, _)| acc | 1 << i);
        let ai = level_of(levels, max_req(&verts, r, s));
        let bi = level_of(levels, max_req(&verts, r, full & !s));
        for a in 0..=ai {
            for b in 0..=bi {
                let slot = &mut out[index(nl, x, a, b)];
                *slot = (*slot).min(cut);
            }
        }
    }
    out
}

/// Outcome of the root test for a finished profile of the whole graph.
fn root_feasible(levels: &[u8], prof: &[u8]) -> bool {
    let nl = levels.len();
    (0..nl).all(|a| (0..nl).all(|b| prof[index(nl, 0, a, b)] >= levels[a].min(levels[b])))
}

struct NodeCtx {
    separator: Vec<VertexId>,
    /// Largest requirement among vertices not touched below this node.
    r_out: u8,
}

impl DpTables {
    /// Builds every node table bottom-up.
    pub fn build(
        g: &EmbeddedMultigraph,
        r: &RequirementMap,
        k: u8,
        bd: &BranchDecomposition,
        opts: DpOptions,
    ) -> Result<DpTables> {
        let mut levels: Vec<u8> = std::iter::once(0).chain(r.as_slice().iter().copied()).collect();
        levels.sort_unstable();
        levels.dedup();
        let nl = levels.len();
        let cap = *levels.last().unwrap();
        let (w, scale) = g.scaled_weights();
        let leaf_max = opts.leaf_max.unwrap_or(k).min(k);
        let edge_sets = bd.edge_sets();
        let ctx: Vec<NodeCtx> = edge_sets
            .iter()
            .zip(&bd.nodes)
            .map(|(set, node)| {
                let mut touched = vec![false; g.num_vertices()];
                for &e in set {
                    let (a, b) = g.endpoints(e);
                    touched[a] = true;
                    touched[b] = true;
                }
                let r_out = (0..g.num_vertices()).filter(|&v| !touched[v]).map(|v| r.get(v)).max().unwrap_or(0);
                NodeCtx { separator: node.separator.clone(), r_out }
            })
            .collect();
        let mut nodes: Vec<NodeTable> = Vec::with_capacity(bd.nodes.len());
        let mut stats = DpStats { width: bd.width, levels: levels.clone(), ..Default::default() };
        for (q, node) in bd.nodes.iter().enumerate() {
            let c = &ctx[q];
            let candidates = match node.kind {
                NodeKind::Leaf(e) => {
                    let (u, v) = g.endpoints(e);
                    let verts = [u, v];
                    (0..=leaf_max)
                        .map(|mult| {
                            let mut prof = vec![cap; (1 << c.separator.len()) * nl * nl];
                            for s in 0u64..4 {
                                let cut = if s == 0 || s == 3 { 0 } else { mult.min(cap) };
                                let x = c
                                    .separator
                                    .iter()
                                    .enumerate()
                                    .filter(|(_, &y)| s >> verts.iter().position(|&z| z == y).unwrap() & 1 == 1)
                                    .fold(0, |acc, (i, _)| acc | 1 << i);
                                let ai = level_of(&levels, max_req(&verts, r, s));
                                let bi = level_of(&levels, max_req(&verts, r, 3 & !s));
                                for a in 0..=ai {
                                    for b in 0..=bi {
                                        let slot = &mut prof[index(nl, x, a, b)];
                                        *slot = (*slot).min(cut);
                                    }
                                }
                            }
                            Entry { profile: prof, weight: w[e] * mult as i64, back: Back::Leaf(mult) }
                        })
                        .collect()
                }
                NodeKind::Inner(c1, c2) => {
                    let pairs = nodes[c1].entries.len() as u64 * nodes[c2].entries.len() as u64;
                    stats.pairs_examined += pairs;
                    if pairs > opts.pair_budget {
                        return Err(Error::Budget(format!("{pairs} entry pairs at decomposition node {q}")));
                    }
                    combine(&nodes[c1], &nodes[c2], &c.separator, nl, cap)
                }
            };
            let mut entries = candidates;
            if opts.connecting_filter {
                let full = (1usize << c.separator.len()) - 1;
                entries.retain(|en| {
                    (0..nl).all(|a| {
                        (0..nl).all(|b| {
                            let inner = levels[a].min(levels[b].max(c.r_out));
                            let outer = levels[a].max(c.r_out).min(levels[b]);
                            en.profile[index(nl, 0, a, b)] >= inner && en.profile[index(nl, full, a, b)] >= outer
                        })
                    })
                });
            }
            if opts.pareto {
                entries = pareto_filter(entries);
            }
            if entries.len() > opts.entry_budget {
                return Err(Error::Budget(format!("{} entries at decomposition node {q}", entries.len())));
            }
            stats.entries_per_node.push(entries.len());
            stats.total_entries += entries.len();
            if let NodeKind::Inner(c1, c2) = node.kind {
                if !opts.keep_profiles {
                    for ch in [c1, c2] {
                        for en in &mut nodes[ch].entries {
                            en.profile = Vec::new();
                        }
                    }
                }
            }
            nodes.push(NodeTable { separator: c.separator.clone(), entries });
        }
        Ok(DpTables { levels, cap, scale, nodes, stats, kinds: bd.nodes.iter().map(|n| n.kind).collect(), m: g.num_edges() })
    }

    /// Multiplicities realising entry `idx` of node `q` (zero outside its subtree).
    pub fn witness(&self, q: usize, idx: usize) -> Vec<u8> {
        let mut mult = vec![0u8; self.m];
        let mut stack = vec![(q, idx)];
        while let Some((q, i)) = stack.pop() {
            match (self.kinds[q], self.nodes[q].entries[i].back) {
                (NodeKind::Leaf(e), Back::Leaf(c)) => mult[e] = c,
                (NodeKind::Inner(c1, c2), Back::Pair(i1, i2)) => {
                    stack.push((c1, i1 as usize));
                    stack.push((c2, i2 as usize));
                }
                _ => unreachable!("back-pointer kind does not match node kind"),
            }
        }
        mult
    }

    /// Cheapest root entry passing the root test.
    pub fn best_root(&self) -> Option<usize> {
        let root = self.nodes.last()?;
        let mut best: Option<usize> = None;
        for (i, en) in root.entries.iter().enumerate() {
            if root_feasible(&self.levels, &en.profile) && best.is_none_or(|b| en.weight < root.entries[b].weight) {
                best = Some(i);
            }
        }
        best
    }
}

/// Entries of a parent from all pairs of child entries, one per distinct
/// profile (the first cheapest pair in row-major order wins).
fn combine(t1: &NodeTable, t2: &NodeTable, sep: &[VertexId], nl: usize, cap: u8) -> Vec<Entry> {
    let mut union: Vec<VertexId> = t1.separator.iter().chain(&t2.separator).copied().collect();
    union.sort_unstable();
    union.dedup();
    let bits = |part: &[VertexId], y: usize| -> usize {
        part.iter().enumerate().fold(0, |acc, (i, v)| {
            let p = union.binary_search(v).unwrap();
            acc | ((y >> p & 1) << i)
        })
    };
    let maps: Vec<(usize, usize, usize)> =
        (0..1usize << union.len()).map(|y| (bits(&t1.separator, y), bits(&t2.separator, y), bits(sep, y))).collect();
    let len = (1 << sep.len()) * nl * nl;
    let merge = |p1: &[u8], p2: &[u8], out: &mut Vec<u8>| {
        out.clear();
        out.resize(len, cap);
        for &(x1, x2, x) in &maps {
            for a in 0..nl {
                for b in 0..nl {
                    let v = (p1[index(nl, x1, a, b)] + p2[index(nl, x2, 0, 0)])
                        .min(p1[index(nl, x1, a, 0)] + p2[index(nl, x2, 0, b)])
                        .min(p1[index(nl, x1, 0, b)] + p2[index(nl, x2, a, 0)])
                        .min(p1[index(nl, x1, 0, 0)] + p2[index(nl, x2, a, b)])
                        .min(cap);
                    let slot = &mut out[index(nl, x, a, b)];
                    *slot = (*slot).min(v);
                }
            }
        }
    };
    const CHUNK: usize = 64;
    let partial: Vec<(Vec<Entry>, HashMap<Vec<u8>, usize>)> = t1
        .entries
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(ci, chunk)| {
            let mut list: Vec<Entry> = Vec::new();
            let mut seen: HashMap<Vec<u8>, usize> = HashMap::new();
            let mut buf = Vec::with_capacity(len);
            for (off, e1) in chunk.iter().enumerate() {
                let i1 = (ci * CHUNK + off) as u32;
                for (i2, e2) in t2.entries.iter().enumerate() {
                    merge(&e1.profile, &e2.profile, &mut buf);
                    let weight = e1.weight + e2.weight;
                    let back = Back::Pair(i1, i2 as u32);
                    match seen.get(&buf) {
                        Some(&j) => {
                            if weight < list[j].weight {
                                list[j].weight = weight;
                                list[j].back = back;
                            }
                        }
                        None => {
                            seen.insert(buf.clone(), list.len());
                            list.push(Entry { profile: buf.clone(), weight, back });
                        }
                    }
                }
            }
            (list, seen)
        })
        .collect();
    let mut list: Vec<Entry> = Vec::new();
    let mut seen: HashMap<Vec<u8>, usize> = HashMap::new();
    for (chunk, _) in partial {
        for en in chunk {
            match seen.get(&en.profile) {
                Some(&j) => {
                    if en.weight < list[j].weight {
                        list[j] = en;
                    }
                }
                None => {
                    seen.insert(en.profile.clone(), list.len());
                    list.push(en);
                }
            }
        }
    }
    list
}

/// Keeps entries not dominated by a no-heavier entry with a pointwise
/// no-smaller profile. Survivors stay in weight order (stable).
fn pareto_filter(mut entries: Vec<Entry>) -> Vec<Entry> {
    entries.sort_by_key(|e| e.weight);
    let mut kept: Vec<Entry> = Vec::with_capacity(entries.len());
    for en in entries {
        let dominated = kept.iter().any(|k| k.profile.iter().zip(&en.profile).all(|(a, b)| a >= b));
        if !dominated {
            kept.push(en);
        }
    }
    kept
}

/// Minimum-weight multiplicity vector in `0..=k` per edge meeting every
/// pairwise requirement, using the decomposition `bd` of `g`.
pub fn dp_solve(
    g: &EmbeddedMultigraph,
    r: &RequirementMap,
    k: u8,
    bd: &BranchDecomposition,
    opts: DpOptions,
) -> Result<DpResult> {
    bd.validate(g)?;
    let terms = r.terminals();
    let m = g.num_edges();
    if terms.len() < 2 {
        return Ok(DpResult {
            weight: Weight::from_integer(0),
            solution: MultiSolution::empty(m, k),
            stats: DpStats { width: bd.width, ..Default::default() },
        });
    }
    if let Some(&v) = terms.iter().find(|&&v| g.degree(v) == 0) {
        return Err(Error::Infeasible(format!("terminal {v} has no incident edges")));
    }
    if r.max() > k {
        return Err(Error::Infeasible(format!("requirement {} exceeds k = {k}", r.max())));
    }
    let tables = DpTables::build(g, r, k, bd, opts)?;
    let root = tables.nodes.len() - 1;
    let best = tables.best_root().ok_or_else(|| Error::Infeasible("no feasible entry at the root".into()))?;
    let mult = tables.witness(root, best);
    let weight = Weight::new(tables.nodes[root].entries[best].weight, tables.scale);
    Ok(DpResult { weight, solution: MultiSolution::new(mult, k)?, stats: tables.stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectivity::is_feasible;
    use crate::dp::decomposition::{decompose, DecomposeOptions};
    use crate::graph::generators::*;
    use crate::oracle::{exact_solve, OracleOptions, OracleOutcome};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn solve(g: &EmbeddedMultigraph, r: &RequirementMap, k: u8) -> Result<DpResult> {
        let bd = decompose(g, DecomposeOptions { width_cap: 10, ..Default::default() })?;
        dp_solve(g, r, k, &bd, DpOptions::default())
    }

    #[test]
    fn small_examples() {
        let g = path(3);
        let r = RequirementMap::zeros(3);
        assert_eq!(solve(&g, &r, 3).unwrap().weight, Weight::from_integer(0));
        let r = RequirementMap::from_vec(vec![1, 0, 1]).unwrap();
        assert_eq!(solve(&g, &r, 1).unwrap().weight, Weight::from_integer(2));
        let g = cycle(3);
        let r = RequirementMap::from_vec(vec![3, 3, 3]).unwrap();
        let res = solve(&g, &r, 3).unwrap();
        assert_eq!(res.weight, Weight::from_integer(5));
        assert!(is_feasible(&g, &res.solution, &r));
        let r = RequirementMap::from_vec(vec![2, 0, 2]).unwrap();
        let res = solve(&path(3), &r, 1);
        assert!(matches!(res, Err(Error::Infeasible(_))));
    }

    #[test]
    fn isolated_terminal_is_infeasible() {
        let g = EmbeddedMultigraph::build(3, vec![(0, 1, Weight::from_integer(1))], vec![vec![0], vec![1], vec![]]).unwrap();
        let r = RequirementMap::from_vec(vec![1, 0, 1]).unwrap();
        assert!(matches!(solve(&g, &r, 1), Err(Error::Infeasible(_))));
    }

    fn random_instance(seed: u64) -> (EmbeddedMultigraph, RequirementMap, u8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(3..8);
        let g = random_triangulation(n, 1, 6, &mut rng);
        let g = thin_connected(&g, 0.5, &mut rng);
        let k = rng.gen_range(1..=3u8);
        let req = (0..n).map(|_| if rng.gen_bool(0.5) { rng.gen_range(1..=k) } else { 0 }).collect();
        (g, RequirementMap::from_vec(req).unwrap(), k)
    }

    #[test]
    fn profiles_match_brute_force() {
        for seed in 0..40 {
            let (g, r, k) = random_instance(seed);
            let bd = decompose(&g, DecomposeOptions { width_cap: 10, ..Default::default() }).unwrap();
            let opts = DpOptions { keep_profiles: true, connecting_filter: false, pareto: false, ..Default::default() };
            let t = DpTables::build(&g, &r, k, &bd, opts).unwrap();
            let sets = bd.edge_sets();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..50 {
                let q = rng.gen_range(0..t.nodes.len());
                let i = rng.gen_range(0..t.nodes[q].entries.len());
                let mult = t.witness(q, i);
                let want = brute_profile(&g, &r, &t.levels, t.cap, &sets[q], &t.nodes[q].separator, &mult);
                assert_eq!(t.nodes[q].entries[i].profile, want, "seed {seed} node {q}");
                let w: i64 = sets[q].iter().map(|&e| g.scaled_weights().0[e] * mult[e] as i64).sum();
                assert_eq!(w, t.nodes[q].entries[i].weight);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]
        #[test]
        fn matches_oracle(seed in 0u64..1_000_000) {
            let (g, r, k) = random_instance(seed);
            let oracle = exact_solve(&g, &r, k, OracleOptions { slot_cap: 60, ..Default::default() }).unwrap();
            let dp = solve(&g, &r, k);
            match oracle {
                OracleOutcome::Optimal(o) => {
                    let dp = dp.unwrap();
                    prop_assert_eq!(dp.weight, o.weight);
                    prop_assert!(is_feasible(&g, &dp.solution, &r));
                }
                OracleOutcome::Infeasible { .. } => {
                    let infeasible = matches!(dp, Err(Error::Infeasible(_)));
                    prop_assert!(infeasible);
                }
                OracleOutcome::Unknown { .. } => {}
            }
        }

        #[test]
        fn filters_preserve_optimum(seed in 0u64..1_000_000) {
            let (g, r, k) = random_instance(seed);
            let bd = decompose(&g, DecomposeOptions { width_cap: 10, ..Default::default() }).unwrap();
            let plain = DpOptions { connecting_filter: false, pareto: false, ..Default::default() };
            let a = dp_solve(&g, &r, k, &bd, plain).map(|x| x.weight);
            let b = dp_solve(&g, &r, k, &bd, DpOptions::default()).map(|x| x.weight);
            prop_assert_eq!(a, b);
        }
    }
}
