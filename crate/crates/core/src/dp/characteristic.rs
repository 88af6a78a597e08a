//! Connectivity characteristics in their set form: separator completions,
//! terminal configurations and satisfiable path sets, with the leaf rules
//! and the pairwise combination step.
//!
//! The production solver ([`super::profile`]) uses cut profiles instead;
//! this module keeps the set form for inspection and cross-checks on tiny
//! separators, where its enumeration is affordable.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::demands::{alg_demands, SmallMultigraph};
use crate::error::{Error, Result};
use crate::graph::{RequirementMap, VertexId};

/// `(x, y, b)`: `b` edge-disjoint paths between separator vertices `x < y`.
pub type Demand = (VertexId, VertexId, u8);

/// Multiset of edges between separator vertices, as pair -> copies (1..=k).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SeparatorCompletion {
    pub edges: BTreeMap<(VertexId, VertexId), u8>,
}

impl SeparatorCompletion {
    pub fn from_pairs(pairs: impl IntoIterator<Item = Demand>) -> Self {
        let mut edges = BTreeMap::new();
        for (x, y, b) in pairs {
            if b > 0 {
                edges.insert((x.min(y), x.max(y)), b);
            }
        }
        SeparatorCompletion { edges }
    }

    pub fn demands(&self) -> Vec<Demand> {
        self.edges.iter().map(|(&(x, y), &b)| (x, y, b)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Configuration {
    /// Paths from the terminal to each separator vertex, in separator order.
    pub a: Vec<u8>,
    pub b: BTreeSet<Demand>,
    pub req: u8,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Characteristic {
    pub c_h: BTreeSet<SeparatorCompletion>,
    pub p_h: BTreeSet<Configuration>,
    pub path_h: BTreeSet<BTreeSet<Demand>>,
}

/// The enumerated sets of a one-edge subgraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeafSets {
    /// Separator, `[u, v]`.
    pub separator: Vec<VertexId>,
    pub com: BTreeSet<SeparatorCompletion>,
    /// Configurations per terminal endpoint.
    pub configs: BTreeMap<VertexId, BTreeSet<Configuration>>,
    pub path_h: BTreeSet<BTreeSet<Demand>>,
}

fn uv_copies(u: VertexId, v: VertexId, range: std::ops::RangeInclusive<u8>) -> BTreeSet<SeparatorCompletion> {
    range.map(|c| SeparatorCompletion::from_pairs([(u, v, c)])).collect()
}

/// Sets for the leaf holding edge `uv` (separator `[u, v]`).
pub fn leaf_sets(u: VertexId, v: VertexId, r: &RequirementMap, k: u8) -> LeafSets {
    let (ru, rv) = (r.get(u), r.get(v));
    let path = BTreeSet::from([(u.min(v), u.max(v), 1)]);
    let mut configs = BTreeMap::new();
    let com = if ru > 0 && rv > 0 {
        uv_copies(u, v, ru.min(rv).saturating_sub(1)..=k)
    } else {
        uv_copies(u, v, 0..=k)
    };
    if ru > 0 {
        configs.insert(
            u,
            BTreeSet::from([
                Configuration { a: vec![k, 0], b: path.clone(), req: ru },
                Configuration { a: vec![k, 1], b: BTreeSet::new(), req: ru },
            ]),
        );
    }
    if rv > 0 {
        configs.insert(
            v,
            BTreeSet::from([
                Configuration { a: vec![0, k], b: path.clone(), req: rv },
                Configuration { a: vec![1, k], b: BTreeSet::new(), req: rv },
            ]),
        );
    }
    LeafSets { separator: vec![u, v], com, configs, path_h: BTreeSet::from([path]) }
}

/// Characteristics of the leaf holding `uv`: one completion (when both
/// endpoints are terminals) and one configuration per terminal endpoint.
pub fn leaf_characteristics(u: VertexId, v: VertexId, r: &RequirementMap, k: u8) -> BTreeSet<Characteristic> {
    let sets = leaf_sets(u, v, r, k);
    let coms: Vec<BTreeSet<SeparatorCompletion>> = if r.get(u) > 0 && r.get(v) > 0 {
        sets.com.iter().map(|c| BTreeSet::from([c.clone()])).collect()
    } else {
        vec![BTreeSet::new()]
    };
    let mut pick: Vec<BTreeSet<Configuration>> = vec![BTreeSet::new()];
    for cs in sets.configs.values() {
        pick = pick
            .iter()
            .flat_map(|p| {
                cs.iter().map(move |c| {
                    let mut q = p.clone();
                    q.insert(c.clone());
                    q
                })
            })
            .collect();
    }
    let mut out = BTreeSet::new();
    for c_h in &coms {
        for p_h in &pick {
            out.insert(Characteristic { c_h: c_h.clone(), p_h: p_h.clone(), path_h: sets.path_h.clone() });
        }
    }
    out
}

/// Local vertex numbering over a list of separators plus extra vertices.
struct Local {
    verts: Vec<VertexId>,
}

impl Local {
    fn new<'a>(parts: impl IntoIterator<Item = &'a [VertexId]>) -> Self {
        let mut verts: Vec<VertexId> = parts.into_iter().flatten().copied().collect();
        verts.sort_unstable();
        verts.dedup();
        Local { verts }
    }

    fn id(&self, v: VertexId) -> usize {
        self.verts.binary_search(&v).expect("vertex outside the local separator union")
    }

    fn graph(&self, extra: usize) -> SmallMultigraph {
        SmallMultigraph::new(self.verts.len() + extra)
    }

    fn add_demands(&self, g: &mut SmallMultigraph, ds: impl IntoIterator<Item = Demand>) {
        for (x, y, b) in ds {
            g.add(self.id(x), self.id(y), b);
        }
    }
}

fn pairs_of(l: &[VertexId]) -> Vec<(VertexId, VertexId)> {
    let mut s = l.to_vec();
    s.sort_unstable();
    let mut out = Vec::new();
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            out.push((s[i], s[j]));
        }
    }
    out
}

/// Every assignment of `0..=k` copies to each pair of `l`.
pub fn all_completions(l: &[VertexId], k: u8) -> Vec<SeparatorCompletion> {
    let pairs = pairs_of(l);
    let mut out = vec![SeparatorCompletion::default()];
    for &(x, y) in &pairs {
        out = out
            .into_iter()
            .flat_map(|c| {
                (0..=k).map(move |b| {
                    let mut c = c.clone();
                    if b > 0 {
                        c.edges.insert((x, y), b);
                    }
                    c
                })
            })
            .collect();
    }
    out
}

fn all_a(len: usize, k: u8) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|a: Vec<u8>| (0..=k).map(move |x| [a.clone(), vec![x]].concat())).collect();
    }
    out
}

#[derive(Clone, Copy, Debug)]
pub struct CombineInput<'a> {
    pub l1: &'a [VertexId],
    pub l2: &'a [VertexId],
    pub l: &'a [VertexId],
    pub k: u8,
    /// Largest requirement among terminals outside `H1 ∪ H2`.
    pub r_out: u8,
    /// Maximum number of characteristics produced.
    pub limit: usize,
}

/// Path sets on `L` satisfiable in the union of one path set per child.
pub fn combine_paths(
    p1: &BTreeSet<BTreeSet<Demand>>,
    p2: &BTreeSet<BTreeSet<Demand>>,
    inp: CombineInput,
) -> BTreeSet<BTreeSet<Demand>> {
    let loc = Local::new([inp.l1, inp.l2]);
    let candidates: Vec<SeparatorCompletion> =
        all_completions(inp.l, inp.k).into_iter().filter(|c| !c.edges.is_empty()).collect();
    let empty = BTreeSet::new();
    let mut out = BTreeSet::new();
    for b1 in p1.iter().chain([&empty]) {
        for b2 in p2.iter().chain([&empty]) {
            let mut h = loc.graph(0);
            loc.add_demands(&mut h, b1.iter().chain(b2).copied());
            for c in &candidates {
                let ds: Vec<(usize, usize, u8)> = c.demands().iter().map(|&(x, y, b)| (loc.id(x), loc.id(y), b)).collect();
                if alg_demands(&h, &ds) {
                    out.insert(c.demands().into_iter().collect());
                }
            }
        }
    }
    out
}

/// Completions on `L` which, together with some path set of the other
/// child, reproduce the connectivity that completion `c` (on `L_i`) gave.
pub fn generalize_completion(
    c: &SeparatorCompletion,
    other_paths: &BTreeSet<BTreeSet<Demand>>,
    li: &[VertexId],
    lo: &[VertexId],
    inp: CombineInput,
) -> BTreeSet<SeparatorCompletion> {
    let loc = Local::new([li, lo, inp.l]);
    let ds: Vec<(usize, usize, u8)> = c.demands().iter().map(|&(x, y, b)| (loc.id(x), loc.id(y), b)).collect();
    let empty = BTreeSet::new();
    let mut out = BTreeSet::new();
    for cand in all_completions(inp.l, inp.k) {
        let ok = other_paths.iter().chain([&empty]).any(|b| {
            let mut h = loc.graph(0);
            loc.add_demands(&mut h, cand.demands().into_iter().chain(b.iter().copied()));
            alg_demands(&h, &ds)
        });
        if ok {
            out.insert(cand);
        }
    }
    out
}

/// Completions on `L` giving `min(req)` edge-disjoint paths between a
/// terminal of `H1` with configuration `c1` and one of `H2` with `c2`.
pub fn cross_completions(
    c1: &Configuration,
    c2: &Configuration,
    inp: CombineInput,
) -> BTreeSet<SeparatorCompletion> {
    let loc = Local::new([inp.l1, inp.l2, inp.l]);
    let (s, t) = (loc.verts.len(), loc.verts.len() + 1);
    let need = c1.req.min(c2.req);
    let mut out = BTreeSet::new();
    for cand in all_completions(inp.l, inp.k) {
        let mut h = loc.graph(2);
        for (i, &a) in c1.a.iter().enumerate() {
            h.add(s, loc.id(inp.l1[i]), a);
        }
        for (i, &a) in c2.a.iter().enumerate() {
            h.add(t, loc.id(inp.l2[i]), a);
        }
        loc.add_demands(&mut h, c1.b.iter().chain(&c2.b).copied().chain(cand.demands()));
        if alg_demands(&h, &[(s, t, need)]) {
            out.insert(cand);
        }
    }
    out
}

/// Connecting configurations on `L` reachable from configuration `c` of a
/// terminal in child `i`, using some path set of the other child.
pub fn generalize_configuration(
    c: &Configuration,
    other_paths: &BTreeSet<BTreeSet<Demand>>,
    li: &[VertexId],
    lo: &[VertexId],
    inp: CombineInput,
) -> BTreeSet<Configuration> {
    let loc = Local::new([li, lo, inp.l]);
    let star = loc.verts.len();
    let empty = BTreeSet::new();
    let hs: Vec<SmallMultigraph> = other_paths
        .iter()
        .chain([&empty])
        .map(|b| {
            let mut h = loc.graph(1);
            for (i, &a) in c.a.iter().enumerate() {
                h.add(star, loc.id(li[i]), a);
            }
            loc.add_demands(&mut h, c.b.iter().chain(b).copied());
            h
        })
        .collect();
    let need = c.req.min(inp.r_out);
    let mut out = BTreeSet::new();
    for a in all_a(inp.l.len(), inp.k) {
        if a.iter().map(|&x| x as u32).sum::<u32>() < need as u32 {
            continue;
        }
        for bset in all_completions(inp.l, inp.k) {
            let mut ds: Vec<(usize, usize, u8)> = a.iter().enumerate().map(|(i, &x)| (star, loc.id(inp.l[i]), x)).collect();
            ds.extend(bset.demands().iter().map(|&(x, y, b)| (loc.id(x), loc.id(y), b)));
            if hs.iter().any(|h| alg_demands(h, &ds)) {
                out.insert(Configuration { a: a.clone(), b: bset.demands().into_iter().collect(), req: c.req });
            }
        }
    }
    out
}

fn product<T: Clone + Ord>(choices: &[BTreeSet<T>], limit: usize) -> Result<Vec<BTreeSet<T>>> {
    let mut out = vec![BTreeSet::new()];
    for opts in choices {
        let mut next = Vec::new();
        for base in &out {
            for o in opts {
                let mut s = base.clone();
                s.insert(o.clone());
                next.push(s);
                if next.len() > limit {
                    return Err(Error::Budget(format!("more than {limit} characteristic combinations")));
                }
            }
        }
        out = next;
    }
    Ok(out)
}

/// All characteristics of `H1 ∪ H2` derivable from `ch1` (on `L1`) and
/// `ch2` (on `L2`), projected to the parent separator `L`.
pub fn combine(ch1: &Characteristic, ch2: &Characteristic, inp: CombineInput) -> Result<BTreeSet<Characteristic>> {
    let path_h = combine_paths(&ch1.path_h, &ch2.path_h, inp);
    let mut c_choices = Vec::new();
    for c in &ch1.c_h {
        c_choices.push(generalize_completion(c, &ch2.path_h, inp.l1, inp.l2, inp));
    }
    for c in &ch2.c_h {
        c_choices.push(generalize_completion(c, &ch1.path_h, inp.l2, inp.l1, inp));
    }
    for c1 in &ch1.p_h {
        for c2 in &ch2.p_h {
            c_choices.push(cross_completions(c1, c2, inp));
        }
    }
    let mut p_choices = Vec::new();
    for c in &ch1.p_h {
        p_choices.push(generalize_configuration(c, &ch2.path_h, inp.l1, inp.l2, inp));
    }
    for c in &ch2.p_h {
        p_choices.push(generalize_configuration(c, &ch1.path_h, inp.l2, inp.l1, inp));
    }
    let cs = product(&c_choices, inp.limit)?;
    let ps = product(&p_choices, inp.limit)?;
    if cs.len().saturating_mul(ps.len()) > inp.limit {
        return Err(Error::Budget(format!("more than {} characteristic combinations", inp.limit)));
    }
    let mut out = BTreeSet::new();
    for c_h in &cs {
        for p_h in &ps {
            out.insert(Characteristic { c_h: c_h.clone(), p_h: p_h.clone(), path_h: path_h.clone() });
        }
    }
    Ok(out)
}
