//! Slices from dual breadth-first levels with the cheapest shift, slice
//! adjacency, artificial terminals and recombination.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::connectivity::{Checker, Mode};
use crate::error::{Error, Result};
use crate::graph::{twin, EdgeId, EmbeddedMultigraph, MultiSolution, RequirementMap, UnionFind, VertexId, Weight};

#[derive(Clone, Debug, Serialize)]
pub struct SliceBoundary {
    pub neighbour: usize,
    /// Edges shared with the neighbour, sorted.
    pub edges: Vec<EdgeId>,
    /// Whether the shared edges form exactly one simple cycle.
    pub simple_cycle: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Slice {
    pub id: usize,
    pub band: usize,
    pub faces: Vec<usize>,
    /// Sorted edge ids of the sliced graph.
    pub edges: Vec<EdgeId>,
    pub boundaries: Vec<SliceBoundary>,
    /// Vertex -> requirement added on this slice's boundaries.
    pub artificial: BTreeMap<VertexId, u8>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Slicing {
    pub slices: Vec<Slice>,
    pub root_face: usize,
    pub face_level: Vec<usize>,
    pub eta: usize,
    pub shift: usize,
    /// Total weight of edges shared by two slices, per shift.
    pub shift_weights: Vec<Weight>,
    /// Pairs of adjacent slices; a tree over the slices.
    pub tree: Vec<(usize, usize)>,
}

impl Slicing {
    pub fn boundary_weight(&self) -> Weight {
        self.shift_weights[self.shift]
    }
}

fn band(level: usize, eta: usize, shift: usize) -> usize {
    (level + eta - shift) / eta
}

fn is_simple_cycle(g: &EmbeddedMultigraph, edges: &[EdgeId]) -> bool {
    if edges.is_empty() {
        return false;
    }
    let mut deg: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut uf = UnionFind::new(g.num_vertices());
    for &e in edges {
        let (a, b) = g.endpoints(e);
        *deg.entry(a).or_default() += 1;
        *deg.entry(b).or_default() += 1;
        uf.union(a, b);
    }
    let first = *deg.keys().next().unwrap();
    deg.values().all(|&d| d == 2) && deg.keys().all(|&v| uf.find(v) == uf.find(first))
}

/// Slices `g` (connected) into bands of `eta` dual BFS levels from the
/// longest face, choosing the shift with the lightest shared edges.
pub fn slice(g: &EmbeddedMultigraph, eta: usize) -> Result<Slicing> {
    assert!(eta >= 1);
    let (face_of, nf) = g.face_ids();
    let mut lens = vec![0usize; nf];
    for d in 0..g.num_darts() {
        lens[face_of[d]] += 1;
    }
    let root_face = (0..nf).max_by_key(|&f| (lens[f], std::cmp::Reverse(f))).unwrap_or(0);
    let mut darts_of = vec![Vec::new(); nf];
    for d in 0..g.num_darts() {
        darts_of[face_of[d]].push(d);
    }
    let mut level = vec![usize::MAX; nf];
    if nf > 0 {
        level[root_face] = 0;
        let mut q = VecDeque::from([root_face]);
        while let Some(f) = q.pop_front() {
            for &d in &darts_of[f] {
                let h = face_of[twin(d)];
                if level[h] == usize::MAX {
                    level[h] = level[f] + 1;
                    q.push_back(h);
                }
            }
        }
    }
    if level.iter().any(|&l| l == usize::MAX) {
        return Err(Error::Slicing("graph is disconnected".into()));
    }
    let shift_weights: Vec<Weight> = (0..eta)
        .map(|s| {
            g.weight_of((0..g.num_edges()).filter(|&e| {
                band(level[face_of[2 * e]], eta, s) != band(level[face_of[2 * e + 1]], eta, s)
            }))
        })
        .collect();
    let shift = (0..eta).min_by_key(|&s| (shift_weights[s], s)).unwrap();
    let fb: Vec<usize> = level.iter().map(|&l| band(l, eta, shift)).collect();
    // faces joined across same-band edges form slices
    let mut uf = UnionFind::new(nf);
    for e in 0..g.num_edges() {
        let (f1, f2) = (face_of[2 * e], face_of[2 * e + 1]);
        if fb[f1] == fb[f2] {
            uf.union(f1, f2);
        }
    }
    let mut slice_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut slice_of_face = vec![0usize; nf];
    for f in 0..nf {
        let r = uf.find(f);
        let next = slice_of_root.len();
        slice_of_face[f] = *slice_of_root.entry(r).or_insert(next);
    }
    let ns = slice_of_root.len();
    let mut slices: Vec<Slice> = (0..ns)
        .map(|id| Slice { id, band: 0, faces: Vec::new(), edges: Vec::new(), boundaries: Vec::new(), artificial: BTreeMap::new() })
        .collect();
    for f in 0..nf {
        let s = &mut slices[slice_of_face[f]];
        s.faces.push(f);
        s.band = fb[f];
    }
    let mut shared: BTreeMap<(usize, usize), Vec<EdgeId>> = BTreeMap::new();
    for e in 0..g.num_edges() {
        let (a, b) = (slice_of_face[face_of[2 * e]], slice_of_face[face_of[2 * e + 1]]);
        slices[a].edges.push(e);
        if a != b {
            slices[b].edges.push(e);
            shared.entry((a.min(b), a.max(b))).or_default().push(e);
        }
    }
    let tree: Vec<(usize, usize)> = shared.keys().copied().collect();
    let mut tuf = UnionFind::new(ns);
    let mut acyclic = true;
    for &(a, b) in &tree {
        acyclic &= tuf.union(a, b);
    }
    if !acyclic || tree.len() + 1 != ns.max(1) {
        return Err(Error::Slicing(format!("{} slices with {} adjacencies do not form a tree", ns, tree.len())));
    }
    for ((a, b), es) in shared {
        let simple = is_simple_cycle(g, &es);
        slices[a].boundaries.push(SliceBoundary { neighbour: b, edges: es.clone(), simple_cycle: simple });
        slices[b].boundaries.push(SliceBoundary { neighbour: a, edges: es, simple_cycle: simple });
    }
    Ok(Slicing { slices, root_face, face_level: level, eta, shift, shift_weights, tree })
}

/// The whole graph as one slice.
pub fn single_slice(g: &EmbeddedMultigraph) -> Slicing {
    let (_, nf) = g.face_ids();
    Slicing {
        slices: vec![Slice {
            id: 0,
            band: 0,
            faces: (0..nf).collect(),
            edges: (0..g.num_edges()).collect(),
            boundaries: Vec::new(),
            artificial: BTreeMap::new(),
        }],
        root_face: 0,
        face_level: vec![0; nf],
        eta: 1,
        shift: 0,
        shift_weights: vec![Weight::from_integer(0)],
        tree: Vec::new(),
    }
}

fn slice_vertices(g: &EmbeddedMultigraph, s: &Slice) -> Vec<VertexId> {
    let mut vs: Vec<VertexId> = s.edges.iter().flat_map(|&e| [g.endpoints(e).0, g.endpoints(e).1]).collect();
    vs.sort_unstable();
    vs.dedup();
    vs
}

/// For every pair of adjacent slices whose shared edges separate terminals,
/// adds a terminal at the smallest shared vertex. Its requirement is the
/// largest `min(r(u), r(v))` over terminals `u`, `v` on opposite sides.
pub fn assign_artificial_terminals(g: &EmbeddedMultigraph, sl: &mut Slicing, r: &RequirementMap) -> Result<()> {
    let ns = sl.slices.len();
    let max_in: Vec<u8> = sl.slices.iter().map(|s| slice_vertices(g, s).iter().map(|&v| r.get(v)).max().unwrap_or(0)).collect();
    let mut adj = vec![Vec::new(); ns];
    for &(a, b) in &sl.tree {
        adj[a].push(b);
        adj[b].push(a);
    }
    for &(a, b) in &sl.tree.clone() {
        // side of `a` once the a-b link is cut
        let mut side = vec![false; ns];
        side[a] = true;
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !side[y] && !(x == a && y == b) {
                    side[y] = true;
                    stack.push(y);
                }
            }
        }
        if side[b] {
            return Err(Error::Slicing("slice adjacency is not a tree".into()));
        }
        let ma = (0..ns).filter(|&s| side[s]).map(|s| max_in[s]).max().unwrap_or(0);
        let mb = (0..ns).filter(|&s| !side[s]).map(|s| max_in[s]).max().unwrap_or(0);
        let rho = ma.min(mb);
        if rho == 0 {
            continue;
        }
        let bnd = sl.slices[a].boundaries.iter().find(|x| x.neighbour == b).expect("tree edges have boundaries");
        let z = bnd.edges.iter().flat_map(|&e| [g.endpoints(e).0, g.endpoints(e).1]).min().unwrap();
        for s in [a, b] {
            let slot = sl.slices[s].artificial.entry(z).or_insert(0);
            *slot = (*slot).max(rho);
        }
    }
    Ok(())
}

/// Requirements of one slice: original requirements of its vertices,
/// raised by its artificial terminals.
pub fn slice_requirements(g: &EmbeddedMultigraph, s: &Slice, r: &RequirementMap) -> RequirementMap {
    let mut out = RequirementMap::zeros(g.num_vertices());
    for v in slice_vertices(g, s) {
        out.set(v, r.get(v).max(s.artificial.get(&v).copied().unwrap_or(0)));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Recombined {
    pub solution: MultiSolution,
    /// Shared edges had to take the sum of the slice multiplicities.
    pub used_sum: bool,
}

/// Union of per-slice multiplicity vectors (indexed like `g`'s edges),
/// taking the max on shared edges; falls back to the (capped) sum.
pub fn recombine(
    g: &EmbeddedMultigraph,
    sl: &Slicing,
    per_slice: &[Vec<u8>],
    r: &RequirementMap,
    k: u8,
) -> Result<Recombined> {
    let m = g.num_edges();
    let mut max = vec![0u8; m];
    let mut sum = vec![0u8; m];
    for (s, mult) in sl.slices.iter().zip(per_slice) {
        for &e in &s.edges {
            max[e] = max[e].max(mult[e]);
            sum[e] = (sum[e] + mult[e]).min(k);
        }
    }
    let checker = Checker::new(g, r, Mode::Edge);
    if checker.feasible(&max) {
        return Ok(Recombined { solution: MultiSolution::new(max, k)?, used_sum: false });
    }
    match checker.first_violation(&sum) {
        None => Ok(Recombined { solution: MultiSolution::new(sum, k)?, used_sum: true }),
        Some(v) => Err(Error::Recombine { u: v.u, v: v.v, need: v.need, have: v.have }),
    }
}

/// Slice dump with edges named by `edge_map` (ids in the original graph).
#[derive(Clone, Debug, Serialize)]
pub struct SliceDump {
    pub id: usize,
    pub band: usize,
    pub edges: Vec<EdgeId>,
    pub boundaries: Vec<(usize, Vec<EdgeId>)>,
    pub artificial: Vec<(VertexId, u8)>,
}

pub fn dump(sl: &Slicing, edge_map: &[EdgeId]) -> Vec<SliceDump> {
    sl.slices
        .iter()
        .map(|s| SliceDump {
            id: s.id,
            band: s.band,
            edges: s.edges.iter().map(|&e| edge_map[e]).collect(),
            boundaries: s.boundaries.iter().map(|b| (b.neighbour, b.edges.iter().map(|&e| edge_map[e]).collect())).collect(),
            artificial: s.artificial.iter().map(|(&v, &x)| (v, x)).collect(),
        })
        .collect()
}
