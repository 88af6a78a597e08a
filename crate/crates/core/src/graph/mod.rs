//! Embedded planar multigraphs.
//!
//! A graph is stored as a rotation system over darts. Edge `e` owns the two
//! darts `2e` (from its first endpoint to its second) and `2e + 1` (the
//! reverse), so `twin(d) = d ^ 1`. Each vertex lists its outgoing darts in
//! counterclockwise order; faces are the orbits of
//! `d -> next_at_vertex(twin(d))`.

pub mod generators;
pub mod io;

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;
pub type DartId = usize;

/// Exact edge weight.
pub type Weight = Ratio<i64>;

#[inline]
pub fn twin(d: DartId) -> DartId {
    d ^ 1
}

#[inline]
pub fn edge_of(d: DartId) -> EdgeId {
    d >> 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dart {
    pub id: DartId,
    pub tail: VertexId,
    pub head: VertexId,
    pub twin: DartId,
    pub next_at_vertex: DartId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedMultigraph {
    n: usize,
    ends: Vec<(VertexId, VertexId)>,
    weights: Vec<Weight>,
    rotation: Vec<Vec<DartId>>,
    next: Vec<DartId>,
    prev: Vec<DartId>,
}

/// A subgraph sharing vertex ids with its parent; edges are renumbered densely.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: EmbeddedMultigraph,
    /// `edge_map[new] = old`.
    pub edge_map: Vec<EdgeId>,
}

impl Subgraph {
    pub fn original_edge(&self, e: EdgeId) -> EdgeId {
        self.edge_map[e]
    }
}

/// Face-vertex dual. Dual dart `d` crosses primal dart `d`.
#[derive(Clone, Debug)]
pub struct Dual {
    pub graph: EmbeddedMultigraph,
    /// Face id of every primal dart (equals the tail of the dual dart).
    pub face_of_dart: Vec<usize>,
}

impl EmbeddedMultigraph {
    /// Validates and builds an embedded graph from an explicit rotation system.
    ///
    /// `rotation[v]` must list every dart whose tail is `v` exactly once.
    /// Self-loops and negative weights are rejected, as is any rotation system
    /// failing Euler's formula on one of its components.
    pub fn build(
        n: usize,
        edges: Vec<(VertexId, VertexId, Weight)>,
        rotation: Vec<Vec<DartId>>,
    ) -> Result<Self> {
        Self::build_inner(n, edges, rotation, false)
    }

    fn build_inner(
        n: usize,
        edges: Vec<(VertexId, VertexId, Weight)>,
        rotation: Vec<Vec<DartId>>,
        allow_loops: bool,
    ) -> Result<Self> {
        if rotation.len() != n {
            return Err(Error::InvalidEmbedding(format!(
                "expected {} rotation lists, got {}",
                n,
                rotation.len()
            )));
        }
        let mut ends = Vec::with_capacity(edges.len());
        let mut weights = Vec::with_capacity(edges.len());
        for (e, (u, v, w)) in edges.into_iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidEmbedding(format!("edge {e} has an endpoint out of range")));
            }
            if u == v && !allow_loops {
                return Err(Error::InvalidEmbedding(format!("edge {e} is a self-loop")));
            }
            if w.is_negative() {
                return Err(Error::InvalidEmbedding(format!("edge {e} has negative weight")));
            }
            ends.push((u, v));
            weights.push(w);
        }
        let darts = 2 * ends.len();
        let tail_of = |d: DartId| if d & 1 == 0 { ends[d >> 1].0 } else { ends[d >> 1].1 };
        let mut seen = vec![false; darts];
        let mut next = vec![usize::MAX; darts];
        let mut prev = vec![usize::MAX; darts];
        for (v, rot) in rotation.iter().enumerate() {
            for (i, &d) in rot.iter().enumerate() {
                if d >= darts {
                    return Err(Error::InvalidEmbedding(format!("vertex {v} lists unknown dart {d}")));
                }
                if tail_of(d) != v {
                    return Err(Error::InvalidEmbedding(format!(
                        "dart {d} listed at vertex {v} but its tail is {}",
                        tail_of(d)
                    )));
                }
                if seen[d] {
                    return Err(Error::InvalidEmbedding(format!("dart {d} listed twice")));
                }
                seen[d] = true;
                let nd = rot[(i + 1) % rot.len()];
                next[d] = nd;
                prev[nd] = d;
            }
        }
        if let Some(d) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidEmbedding(format!("dart {d} missing from rotation of vertex {}", tail_of(d))));
        }
        let g = EmbeddedMultigraph { n, ends, weights, rotation, next, prev };
        g.check_euler()?;
        Ok(g)
    }

    /// Builds a simple graph from its face boundaries, each a closed walk of
    /// vertices listed in traversal order. Every edge must be traversed once in
    /// each direction. Edge ids follow the sorted `(min, max)` endpoint order.
    pub fn from_faces(
        n: usize,
        faces: &[Vec<VertexId>],
        mut weight: impl FnMut(VertexId, VertexId) -> Weight,
    ) -> Result<Self> {
        let mut pairs = BTreeSet::new();
        for f in faces {
            for i in 0..f.len() {
                let (a, b) = (f[i], f[(i + 1) % f.len()]);
                if a == b {
                    return Err(Error::InvalidEmbedding("face walk repeats a vertex consecutively".into()));
                }
                pairs.insert((a.min(b), a.max(b)));
            }
        }
        let pairs: Vec<_> = pairs.into_iter().collect();
        let index = |a: VertexId, b: VertexId| pairs.binary_search(&(a.min(b), a.max(b))).ok();
        let dart_from = |v: VertexId, to: VertexId| {
            let e = index(v, to).expect("edge collected above");
            if pairs[e].0 == v {
                2 * e
            } else {
                2 * e + 1
            }
        };
        // In a walk a -> b -> c the dart b->c follows b->a in b's rotation.
        let mut succ = vec![usize::MAX; 2 * pairs.len()];
        for f in faces {
            let len = f.len();
            for i in 0..len {
                let a = f[(i + len - 1) % len];
                let b = f[i];
                let c = f[(i + 1) % len];
                let from = dart_from(b, a);
                if succ[from] != usize::MAX {
                    return Err(Error::InvalidEmbedding(format!("corner at vertex {b} appears twice")));
                }
                succ[from] = dart_from(b, c);
            }
        }
        let mut rotation = vec![Vec::new(); n];
        let mut incident = vec![Vec::new(); n];
        for (e, &(u, v)) in pairs.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidEmbedding("face vertex out of range".into()));
            }
            incident[u].push(2 * e);
            incident[v].push(2 * e + 1);
        }
        for v in 0..n {
            let Some(&start) = incident[v].iter().min() else { continue };
            let mut d = start;
            loop {
                rotation[v].push(d);
                d = succ[d];
                if d == usize::MAX {
                    return Err(Error::InvalidEmbedding(format!("open rotation at vertex {v}")));
                }
                if d == start {
                    break;
                }
                if rotation[v].len() > incident[v].len() {
                    return Err(Error::InvalidEmbedding(format!("rotation at vertex {v} does not close")));
                }
            }
            if rotation[v].len() != incident[v].len() {
                return Err(Error::InvalidEmbedding(format!("rotation at vertex {v} is not a single cycle")));
            }
        }
        let edges = pairs.iter().map(|&(u, v)| (u, v, weight(u, v))).collect();
        Self::build(n, edges, rotation)
    }

    fn check_euler(&self) -> Result<()> {
        let mut uf = UnionFind::new(self.n);
        for &(u, v) in &self.ends {
            uf.union(u, v);
        }
        let mut verts = vec![0i64; self.n];
        let mut edges = vec![0i64; self.n];
        let mut faces = vec![0i64; self.n];
        for v in 0..self.n {
            verts[uf.find(v)] += 1;
        }
        for &(u, _) in &self.ends {
            edges[uf.find(u)] += 1;
        }
        for f in self.faces() {
            faces[uf.find(self.tail(f[0]))] += 1;
        }
        for v in 0..self.n {
            if uf.find(v) != v {
                continue;
            }
            let f = if edges[v] == 0 { 1 } else { faces[v] };
            let chi = verts[v] - edges[v] + f;
            if chi != 2 {
                return Err(Error::InvalidEmbedding(format!(
                    "component of vertex {v} has V - E + F = {chi}, not 2"
                )));
            }
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.ends.len()
    }

    pub fn num_darts(&self) -> usize {
        2 * self.ends.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.ends[e]
    }

    pub fn weight(&self, e: EdgeId) -> Weight {
        self.weights[e]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn tail(&self, d: DartId) -> VertexId {
        let (u, v) = self.ends[d >> 1];
        if d & 1 == 0 {
            u
        } else {
            v
        }
    }

    pub fn head(&self, d: DartId) -> VertexId {
        self.tail(twin(d))
    }

    pub fn next_at_vertex(&self, d: DartId) -> DartId {
        self.next[d]
    }

    pub fn prev_at_vertex(&self, d: DartId) -> DartId {
        self.prev[d]
    }

    pub fn dart(&self, d: DartId) -> Dart {
        Dart { id: d, tail: self.tail(d), head: self.head(d), twin: twin(d), next_at_vertex: self.next[d] }
    }

    /// Outgoing darts of `v` in counterclockwise order.
    pub fn rotation(&self, v: VertexId) -> &[DartId] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[v].len()
    }

    /// The dart following `d` along its face.
    pub fn face_successor(&self, d: DartId) -> DartId {
        self.next[twin(d)]
    }

    /// All face cycles, each starting at its smallest dart; faces are ordered
    /// by that dart.
    pub fn faces(&self) -> Vec<Vec<DartId>> {
        let mut seen = vec![false; self.num_darts()];
        let mut faces = Vec::new();
        for start in 0..self.num_darts() {
            if seen[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                face.push(d);
                d = self.face_successor(d);
            }
            faces.push(face);
        }
        faces
    }

    /// Face id of every dart, consistent with the ordering of [`faces`](Self::faces).
    pub fn face_ids(&self) -> (Vec<usize>, usize) {
        let mut id = vec![usize::MAX; self.num_darts()];
        let mut count = 0;
        for start in 0..self.num_darts() {
            if id[start] != usize::MAX {
                continue;
            }
            let mut d = start;
            while id[d] == usize::MAX {
                id[d] = count;
                d = self.face_successor(d);
            }
            count += 1;
        }
        (id, count)
    }

    pub fn num_faces(&self) -> usize {
        self.face_ids().1
    }

    /// Face-vertex dual; dual edge `e` crosses primal edge `e`.
    pub fn dual(&self) -> Dual {
        let (face_of_dart, count) = self.face_ids();
        let edges = (0..self.num_edges())
            .map(|e| (face_of_dart[2 * e], face_of_dart[2 * e + 1], self.weights[e]))
            .collect();
        let mut rotation = vec![Vec::new(); count];
        for face in self.faces() {
            let f = face_of_dart[face[0]];
            rotation[f] = face;
        }
        let graph = Self::build_inner(count, edges, rotation, true)
            .expect("the dual of a valid embedding is a valid embedding");
        Dual { graph, face_of_dart }
    }

    /// Same embedding with new edge weights.
    pub fn with_weights(&self, weights: Vec<Weight>) -> EmbeddedMultigraph {
        assert_eq!(weights.len(), self.num_edges());
        assert!(weights.iter().all(|w| !w.is_negative()), "weights must be nonnegative");
        EmbeddedMultigraph { weights, ..self.clone() }
    }

    pub fn total_weight(&self) -> Weight {
        self.weights.iter().copied().sum()
    }

    pub fn weight_of(&self, edges: impl IntoIterator<Item = EdgeId>) -> Weight {
        edges.into_iter().map(|e| self.weights[e]).sum()
    }

    /// Weights scaled to integers by the least common denominator.
    pub fn scaled_weights(&self) -> (Vec<i64>, i64) {
        let scale = self.weights.iter().fold(1i64, |acc, w| acc.lcm(w.denom()));
        let scaled = self.weights.iter().map(|w| w.numer() * (scale / w.denom())).collect();
        (scaled, scale)
    }

    /// Vertex ids adjacent to `v` through edges, with multiplicity.
    pub fn incident_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.rotation[v].iter().map(|&d| edge_of(d))
    }

    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.ends[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Subgraph keeping the edges flagged in `keep`, with the induced rotation.
    pub fn edge_subgraph(&self, keep: &[bool]) -> Subgraph {
        let mut new_id = vec![usize::MAX; self.num_edges()];
        let mut edge_map = Vec::new();
        let mut edges = Vec::new();
        for e in 0..self.num_edges() {
            if keep[e] {
                new_id[e] = edge_map.len();
                edge_map.push(e);
                let (u, v) = self.ends[e];
                edges.push((u, v, self.weights[e]));
            }
        }
        let rotation = self
            .rotation
            .iter()
            .map(|rot| {
                rot.iter()
                    .filter(|&&d| keep[edge_of(d)])
                    .map(|&d| 2 * new_id[edge_of(d)] + (d & 1))
                    .collect()
            })
            .collect();
        let graph = Self::build_inner(self.n, edges, rotation, true)
            .expect("subgraphs of planar embeddings are planar embeddings");
        Subgraph { graph, edge_map }
    }

    /// Faces of the subgraph `keep`, expressed with this graph's dart ids.
    pub fn subgraph_faces(&self, keep: &[bool]) -> Vec<Vec<DartId>> {
        let succ = |d: DartId| self.next_in_subgraph(twin(d), keep);
        let mut seen = vec![false; self.num_darts()];
        let mut faces = Vec::new();
        for start in 0..self.num_darts() {
            if seen[start] || !keep[edge_of(start)] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                face.push(d);
                d = succ(d);
            }
            faces.push(face);
        }
        faces
    }

    fn next_in_subgraph(&self, d: DartId, keep: &[bool]) -> DartId {
        let mut x = self.next[d];
        while !keep[edge_of(x)] {
            x = self.next[x];
        }
        x
    }

    fn prev_in_subgraph(&self, d: DartId, keep: &[bool]) -> Option<DartId> {
        let mut x = self.prev[d];
        while !keep[edge_of(x)] {
            if x == d {
                return None;
            }
            x = self.prev[x];
        }
        Some(x)
    }

    /// Assigns every edge outside `keep` to the face of the subgraph whose
    /// region contains it. Returns the subgraph faces and, per face, the
    /// enclosed non-subgraph edges. Edges in components that never touch the
    /// subgraph are returned separately.
    pub fn regions(&self, keep: &[bool]) -> Regions {
        let faces = self.subgraph_faces(keep);
        let mut face_of = vec![usize::MAX; self.num_darts()];
        for (i, f) in faces.iter().enumerate() {
            for &d in f {
                face_of[d] = i;
            }
        }
        let on_sub: Vec<bool> =
            (0..self.n).map(|v| self.rotation[v].iter().any(|&d| keep[edge_of(d)])).collect();
        // Group outside edges that meet at vertices off the subgraph.
        let mut uf = UnionFind::new(self.num_edges());
        for v in 0..self.n {
            if on_sub[v] {
                continue;
            }
            let outs: Vec<EdgeId> = self.incident_edges(v).filter(|&e| !keep[e]).collect();
            for w in outs.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let mut comp_face = vec![usize::MAX; self.num_edges()];
        for d in 0..self.num_darts() {
            let e = edge_of(d);
            if keep[e] || !on_sub[self.tail(d)] {
                continue;
            }
            let root = uf.find(e);
            if comp_face[root] != usize::MAX {
                continue;
            }
            let a = self.prev_in_subgraph(d, keep).expect("vertex lies on the subgraph");
            comp_face[root] = face_of[twin(a)];
        }
        let mut interiors = vec![Vec::new(); faces.len()];
        let mut detached = Vec::new();
        for e in 0..self.num_edges() {
            if keep[e] {
                continue;
            }
            match comp_face[uf.find(e)] {
                usize::MAX => detached.push(e),
                f => interiors[f].push(e),
            }
        }
        Regions { faces, interiors, detached }
    }

    /// Boundary plus everything `keep`'s face `cycle` encloses.
    ///
    /// `cycle` must be a face of the subgraph `keep` (any rotation of it).
    pub fn enclosed_subgraph(&self, keep: &[bool], cycle: &[DartId]) -> Result<Subgraph> {
        let regions = self.regions(keep);
        let idx = regions
            .faces
            .iter()
            .position(|f| same_cycle(f, cycle))
            .ok_or(Error::NotAFace)?;
        let mut mask = vec![false; self.num_edges()];
        for &d in &regions.faces[idx] {
            mask[edge_of(d)] = true;
        }
        for &e in &regions.interiors[idx] {
            mask[e] = true;
        }
        Ok(self.edge_subgraph(&mask))
    }

    /// Connected-component label of every vertex (isolated vertices get their own).
    pub fn components(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.n);
        for &(u, v) in &self.ends {
            uf.union(u, v);
        }
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut out = vec![0; self.n];
        for v in 0..self.n {
            let r = uf.find(v);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            out[v] = label[r];
        }
        out
    }

    /// Replaces every edge by `k` parallel copies that stay consecutive in
    /// each rotation. Copy `j` of edge `e` gets id `k * e + j`.
    pub fn augment_parallel(&self, k: usize) -> EmbeddedMultigraph {
        assert!(k >= 1, "k must be at least 1");
        let mut edges = Vec::with_capacity(k * self.num_edges());
        for e in 0..self.num_edges() {
            let (u, v) = self.ends[e];
            for _ in 0..k {
                edges.push((u, v, self.weights[e]));
            }
        }
        let rotation = self
            .rotation
            .iter()
            .map(|rot| {
                let mut out = Vec::with_capacity(rot.len() * k);
                for &d in rot {
                    let e = edge_of(d);
                    let side = d & 1;
                    // Forward darts list copies in increasing order and reverse
                    // darts in decreasing order, so the copies bound bigons.
                    if side == 0 {
                        out.extend((0..k).map(|j| 2 * (k * e + j)));
                    } else {
                        out.extend((0..k).rev().map(|j| 2 * (k * e + j) + 1));
                    }
                }
                out
            })
            .collect();
        Self::build_inner(self.n, edges, rotation, true).expect("parallel copies keep the embedding planar")
    }
}

/// Subgraph faces with the outside edges each one encloses.
#[derive(Clone, Debug)]
pub struct Regions {
    pub faces: Vec<Vec<DartId>>,
    pub interiors: Vec<Vec<EdgeId>>,
    pub detached: Vec<EdgeId>,
}

fn same_cycle(a: &[DartId], b: &[DartId]) -> bool {
    if a.len() != b.len() || a.is_empty() {
        return a.len() == b.len();
    }
    match a.iter().position(|&d| d == b[0]) {
        Some(off) => (0..a.len()).all(|i| a[(off + i) % a.len()] == b[i]),
        None => false,
    }
}

/// Requirement in {0,1,2,3} for every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequirementMap {
    req: Vec<u8>,
}

impl RequirementMap {
    pub fn zeros(n: usize) -> Self {
        RequirementMap { req: vec![0; n] }
    }

    pub fn from_vec(req: Vec<u8>) -> Result<Self> {
        if let Some(v) = req.iter().position(|&r| r > 3) {
            return Err(Error::InvalidQuery(format!("requirement of vertex {v} exceeds 3")));
        }
        Ok(RequirementMap { req })
    }

    pub fn get(&self, v: VertexId) -> u8 {
        self.req[v]
    }

    pub fn set(&mut self, v: VertexId, r: u8) {
        assert!(r <= 3, "requirements live in 0..=3");
        self.req[v] = r;
    }

    pub fn len(&self) -> usize {
        self.req.len()
    }

    pub fn is_empty(&self) -> bool {
        self.req.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.req
    }

    pub fn terminals(&self) -> Vec<VertexId> {
        (0..self.req.len()).filter(|&v| self.req[v] > 0).collect()
    }

    pub fn max(&self) -> u8 {
        self.req.iter().copied().max().unwrap_or(0)
    }

    /// Pairs of distinct terminals with their required connectivity.
    pub fn demand_pairs(&self) -> Vec<(VertexId, VertexId, u8)> {
        let t = self.terminals();
        let mut out = Vec::new();
        for (i, &u) in t.iter().enumerate() {
            for &v in &t[i + 1..] {
                out.push((u, v, self.req[u].min(self.req[v])));
            }
        }
        out
    }
}

/// Edge multiplicities of a relaxed solution.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiSolution {
    pub mult: Vec<u8>,
    pub k: u8,
}

impl MultiSolution {
    pub fn empty(m: usize, k: u8) -> Self {
        MultiSolution { mult: vec![0; m], k }
    }

    pub fn new(mult: Vec<u8>, k: u8) -> Result<Self> {
        if let Some(e) = mult.iter().position(|&x| x > k) {
            return Err(Error::InvalidQuery(format!("multiplicity of edge {e} exceeds {k}")));
        }
        Ok(MultiSolution { mult, k })
    }

    pub fn weight(&self, g: &EmbeddedMultigraph) -> Weight {
        self.mult
            .iter()
            .enumerate()
            .map(|(e, &m)| g.weight(e) * Weight::from_integer(m as i64))
            .fold(Weight::zero(), |a, b| a + b)
    }

    pub fn copies(&self) -> usize {
        self.mult.iter().map(|&m| m as usize).sum()
    }

    pub fn support(&self) -> Vec<EdgeId> {
        (0..self.mult.len()).filter(|&e| self.mult[e] > 0).collect()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let p = self.parent[y];
            self.parent[y] = r;
            y = p;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
}

/// Parses `p`, `p/q` or a decimal like `0.25` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Weight> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: i64 = a.trim().parse().ok()?;
        let b: i64 = b.trim().parse().ok()?;
        if b == 0 {
            return None;
        }
        return Some(Weight::new(a, b));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let int: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().ok()? };
        let den = 10i64.pow(frac.len() as u32);
        let f: i64 = frac.parse().ok()?;
        let num = int.abs() * den + f;
        return Some(Weight::new(if neg { -num } else { num }, den));
    }
    s.parse::<i64>().ok().map(Weight::from_integer)
}

pub fn format_rational(w: &Weight) -> String {
    if *w.denom() == 1 {
        w.numer().to_string()
    } else {
        format!("{}/{}", w.numer(), w.denom())
    }
}

pub fn to_f64(w: &Weight) -> f64 {
    *w.numer() as f64 / *w.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::generators::*;
    use super::*;

    fn one(_: usize, _: usize) -> Weight {
        Weight::from_integer(1)
    }

    #[test]
    fn triangle_has_two_faces() {
        let g = cycle(3);
        assert_eq!(g.num_faces(), 2);
        let faces = g.faces();
        assert!(faces.iter().all(|f| f.len() == 3));
    }

    #[test]
    fn single_edge_has_one_face() {
        let g = path(2);
        assert_eq!((g.num_vertices(), g.num_edges(), g.num_faces()), (2, 1, 1));
    }

    #[test]
    fn path_of_two_edges_has_one_face_of_length_four() {
        let g = path(3);
        let faces = g.faces();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].len(), 4);
    }

    /// Brute-force face tracing independent of the rotation-system code: a
    /// grid with r rows and c columns of vertices has (r-1)(c-1) squares.
    #[test]
    fn grid_face_counts_match_hand_counts() {
        assert_eq!(grid(4, 4).num_faces(), 10);
        let g = grid(2, 3);
        let mut lens: Vec<usize> = g.faces().iter().map(|f| f.len()).collect();
        lens.sort();
        assert_eq!(lens, vec![4, 4, 6]);
        let g = grid(3, 3);
        let mut lens: Vec<usize> = g.faces().iter().map(|f| f.len()).collect();
        lens.sort();
        assert_eq!(lens, vec![4, 4, 4, 4, 8]);
    }

    #[test]
    fn dual_examples() {
        let d = cycle(3).dual().graph;
        assert_eq!(d.num_vertices(), 2);
        assert_eq!(d.num_edges(), 3);
        for e in 0..3 {
            let (a, b) = d.endpoints(e);
            assert_ne!(a, b);
        }
        let d = path(2).dual().graph;
        assert_eq!(d.num_vertices(), 1);
        assert_eq!(d.endpoints(0), (0, 0));
        assert_eq!(grid(3, 3).dual().graph.num_vertices(), 5);
    }

    #[test]
    fn dual_of_dual_matches_primal() {
        for g in [grid(3, 4), wheel(5), octahedron(), cycle(6), path(4)] {
            let d1 = g.dual();
            let d2 = d1.graph.dual();
            assert_eq!(d2.graph.num_vertices(), g.num_vertices());
            assert_eq!(d2.graph.num_edges(), g.num_edges());
            // dual-of-dual face of dart d is the rotation orbit of d, i.e. tail(d).
            let mut map = vec![usize::MAX; g.num_vertices()];
            for d in 0..g.num_darts() {
                let f = d2.face_of_dart[d];
                let v = g.tail(d);
                assert!(map[v] == usize::MAX || map[v] == f);
                map[v] = f;
            }
            for e in 0..g.num_edges() {
                let (u, v) = g.endpoints(e);
                let (a, b) = d2.graph.endpoints(e);
                assert_eq!((map[u], map[v]), (a, b));
            }
        }
    }

    #[test]
    fn rejects_bad_rotations() {
        let w = Weight::from_integer(1);
        // dart listed at the wrong vertex
        let err = EmbeddedMultigraph::build(2, vec![(0, 1, w)], vec![vec![1], vec![0]]);
        assert!(err.is_err());
        // self loop
        let err = EmbeddedMultigraph::build(1, vec![(0, 0, w)], vec![vec![0, 1]]);
        assert!(err.is_err());
        // K4 with a twisted rotation at one vertex fails Euler.
        let good = k4();
        let mut rotation: Vec<Vec<DartId>> = (0..4).map(|v| good.rotation(v).to_vec()).collect();
        rotation[0].swap(0, 1);
        let edges = (0..6).map(|e| (good.endpoints(e).0, good.endpoints(e).1, w)).collect();
        assert!(EmbeddedMultigraph::build(4, edges, rotation).is_err());
        // negative weight
        let err = EmbeddedMultigraph::build(2, vec![(0, 1, -w)], vec![vec![0], vec![1]]);
        assert!(err.is_err());
    }

    #[test]
    fn enclosed_subgraph_examples() {
        // K3 with H = K3: either face encloses nothing extra.
        let g = cycle(3);
        let keep = vec![true; 3];
        let face = g.subgraph_faces(&keep)[0].clone();
        assert_eq!(g.enclosed_subgraph(&keep, &face).unwrap().graph.num_edges(), 3);

        // Wheel with H = rim: one side holds hub and spokes.
        let g = wheel(4);
        let keep: Vec<bool> = (0..g.num_edges()).map(|e| is_rim(&g, e, 4)).collect();
        let sizes: Vec<usize> = g
            .subgraph_faces(&keep)
            .iter()
            .map(|f| g.enclosed_subgraph(&keep, f).unwrap().graph.num_edges())
            .collect();
        let mut sizes = sizes;
        sizes.sort();
        assert_eq!(sizes, vec![4, 8]);

        // 3x3 grid with H = boundary: 4 inner edges and the centre vertex.
        let g = grid(3, 3);
        let center = 4;
        let keep: Vec<bool> = (0..g.num_edges())
            .map(|e| {
                let (u, v) = g.endpoints(e);
                u != center && v != center
            })
            .collect();
        let regions = g.regions(&keep);
        let mut inner: Vec<usize> = regions.interiors.iter().map(|i| i.len()).collect();
        inner.sort();
        assert_eq!(inner, vec![0, 4]);
        assert!(regions.detached.is_empty());

        let bogus = vec![0usize, 2];
        assert_eq!(g.enclosed_subgraph(&keep, &bogus).unwrap_err(), Error::NotAFace);
    }

    fn is_rim(g: &EmbeddedMultigraph, e: EdgeId, hub: VertexId) -> bool {
        let (u, v) = g.endpoints(e);
        u != hub && v != hub
    }

    #[test]
    fn augment_parallel_faces() {
        let g = cycle(3).augment_parallel(3);
        assert_eq!(g.num_edges(), 9);
        let mut lens: Vec<usize> = g.faces().iter().map(|f| f.len()).collect();
        lens.sort();
        assert_eq!(lens, vec![2, 2, 2, 2, 2, 2, 3, 3]);
        assert_eq!(cycle(3).augment_parallel(1), cycle(3));
        assert_eq!(path(2).augment_parallel(3).num_edges(), 3);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("0.25"), Some(Weight::new(1, 4)));
        assert_eq!(parse_rational("3/6"), Some(Weight::new(1, 2)));
        assert_eq!(parse_rational("7"), Some(Weight::from_integer(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(format_rational(&Weight::new(3, 2)), "3/2");
        let g = EmbeddedMultigraph::from_faces(3, &[vec![0, 1, 2], vec![0, 2, 1]], |u, v| {
            Weight::new((u + v) as i64, 2)
        })
        .unwrap();
        let (scaled, scale) = g.scaled_weights();
        assert_eq!(scale, 2);
        assert_eq!(scaled, vec![1, 2, 3]);
        let _ = one(0, 0);
    }
}
