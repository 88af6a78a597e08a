//! Mortar graph, bricks and portals.
//!
//! The mortar graph starts as an approximate Steiner tree of the terminals
//! and grows by chords: paths through the interior of one of its faces
//! between two positions of the face's boundary walk. Chords are added to
//! close faces whose boundary walk is not a simple cycle, and to shortcut
//! south boundaries that are not ε-short. Every face of the final mortar
//! graph, together with what it encloses, is a brick.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::graph::{edge_of, twin, DartId, EdgeId, EmbeddedMultigraph, RequirementMap, VertexId, Weight};
use crate::steiner::{approx_steiner, dijkstra, INF};

#[derive(Clone, Copy, Debug)]
pub struct MortarOptions {
    pub epsilon: Weight,
    /// Chords added at most; `None` means `2n + 16`.
    pub max_chords: Option<usize>,
}

impl MortarOptions {
    pub fn new(epsilon: Weight) -> Self {
        MortarOptions { epsilon, max_chords: None }
    }
}

/// Default portal count for a given ε: `ceil(ε^-3)`, at most 16.
pub fn default_theta(epsilon: Weight) -> usize {
    let inv = Weight::from_integer(1) / epsilon;
    let cube = inv * inv * inv;
    cube.ceil().to_integer().clamp(1, 16) as usize
}

#[derive(Clone, Debug, Serialize)]
pub struct MortarGraph {
    /// Membership flag per edge of the input graph.
    pub edges: Vec<bool>,
    pub weight: Weight,
    pub steiner_weight: Weight,
    /// `weight / steiner_weight`, when the tree is nonempty.
    pub ratio: Option<Weight>,
    /// The target `9 / ε`.
    pub bound: Weight,
    pub closing_chords: usize,
    pub shortcut_chords: usize,
    /// Total weight of the shortcut chords.
    pub column_weight: Weight,
}

impl MortarGraph {
    pub fn edge_list(&self) -> Vec<EdgeId> {
        (0..self.edges.len()).filter(|&e| self.edges[e]).collect()
    }
}

/// Contiguous piece of a brick's boundary walk: darts `start .. start + len`
/// (cyclically); it visits positions `start ..= start + len`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub start: usize,
    pub len: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Brick {
    pub id: usize,
    /// Face walk of the mortar graph, as darts of the input graph.
    pub boundary: Vec<DartId>,
    pub interior: Vec<EdgeId>,
    pub north: Arc,
    pub east: Arc,
    pub south: Arc,
    pub west: Arc,
    /// Walk positions of the portals, increasing.
    pub portal_positions: Vec<usize>,
    /// Distinct portal vertices in walk order.
    pub portals: Vec<VertexId>,
}

impl Brick {
    /// Vertex at each walk position.
    pub fn walk_vertices(&self, g: &EmbeddedMultigraph) -> Vec<VertexId> {
        self.boundary.iter().map(|&d| g.tail(d)).collect()
    }

    /// Vertices of an arc, in walk order.
    pub fn arc_vertices(&self, g: &EmbeddedMultigraph, arc: Arc) -> Vec<VertexId> {
        let walk = self.walk_vertices(g);
        if walk.is_empty() {
            return Vec::new();
        }
        (0..=arc.len).map(|i| walk[(arc.start + i) % walk.len()]).collect()
    }

    pub fn boundary_edges(&self) -> Vec<EdgeId> {
        let mut es: Vec<EdgeId> = self.boundary.iter().map(|&d| edge_of(d)).collect();
        es.sort_unstable();
        es.dedup();
        es
    }

    /// Boundary edges plus interior edges.
    pub fn edges(&self) -> Vec<EdgeId> {
        let mut es = self.boundary_edges();
        es.extend_from_slice(&self.interior);
        es.sort_unstable();
        es.dedup();
        es
    }

    /// Weight of the boundary walk (edges traversed twice count twice).
    pub fn boundary_weight(&self, g: &EmbeddedMultigraph) -> Weight {
        g.weight_of(self.boundary.iter().map(|&d| edge_of(d)))
    }

    pub fn is_simple_cycle(&self, g: &EmbeddedMultigraph) -> bool {
        simple_walk(g, &self.boundary)
    }
}

fn simple_walk(g: &EmbeddedMultigraph, walk: &[DartId]) -> bool {
    let mut vs: Vec<VertexId> = walk.iter().map(|&d| g.tail(d)).collect();
    let mut es: Vec<EdgeId> = walk.iter().map(|&d| edge_of(d)).collect();
    vs.sort_unstable();
    vs.dedup();
    es.sort_unstable();
    es.dedup();
    vs.len() == walk.len() && es.len() == walk.len()
}

/// Cached single-source distances in the input graph.
struct Metric<'a> {
    g: &'a EmbeddedMultigraph,
    w: &'a [i64],
    cache: HashMap<VertexId, Vec<i64>>,
}

impl Metric<'_> {
    fn dist(&mut self, a: VertexId, b: VertexId) -> i64 {
        let (g, w) = (self.g, self.w);
        self.cache.entry(a).or_insert_with(|| dijkstra(g, w, &[(a, 0)], None).dist)[b]
    }
}

/// A face of the mortar graph cut open along its boundary walk: one node
/// per walk position, one per enclosed vertex off the mortar graph, and
/// the enclosed edges between them.
struct OpenFace {
    walk: Vec<DartId>,
    pos_vertex: Vec<VertexId>,
    prefix: Vec<i64>,
    adj: Vec<Vec<(usize, EdgeId, i64)>>,
}

impl OpenFace {
    fn new(g: &EmbeddedMultigraph, w: &[i64], mortar: &[bool], on_mortar: &[bool], walk: &[DartId], interior: &[EdgeId]) -> Self {
        let len = walk.len();
        let pos_vertex: Vec<VertexId> = walk.iter().map(|&d| g.tail(d)).collect();
        let mut prefix = vec![0i64; len + 1];
        for i in 0..len {
            prefix[i + 1] = prefix[i] + w[edge_of(walk[i])];
        }
        // corner of each enclosed dart leaving a mortar vertex
        let mut corner: HashMap<DartId, usize> = HashMap::new();
        for i in 0..len {
            let arrive = twin(walk[(i + len - 1) % len]);
            let mut x = g.next_at_vertex(arrive);
            while x != walk[i] {
                if !mortar[edge_of(x)] {
                    corner.insert(x, i);
                }
                x = g.next_at_vertex(x);
            }
        }
        let mut node: HashMap<VertexId, usize> = HashMap::new();
        let mut adj: Vec<Vec<(usize, EdgeId, i64)>> = vec![Vec::new(); len];
        let mut id_of = |d: DartId, adj: &mut Vec<Vec<(usize, EdgeId, i64)>>| -> usize {
            let v = g.tail(d);
            if on_mortar[v] {
                corner[&d]
            } else {
                *node.entry(v).or_insert_with(|| {
                    adj.push(Vec::new());
                    adj.len() - 1
                })
            }
        };
        for &e in interior {
            let a = id_of(2 * e, &mut adj);
            let b = id_of(2 * e + 1, &mut adj);
            adj[a].push((b, e, w[e]));
            adj[b].push((a, e, w[e]));
        }
        OpenFace { walk: walk.to_vec(), pos_vertex, prefix, adj }
    }

    fn len(&self) -> usize {
        self.walk.len()
    }

    /// Walk weight from position `a` forward `steps` darts.
    fn arc_weight(&self, a: usize, steps: usize) -> i64 {
        let len = self.len();
        let total = self.prefix[len];
        let b = a + steps;
        if b <= len {
            self.prefix[b] - self.prefix[a]
        } else {
            total - self.prefix[a] + self.prefix[b - len]
        }
    }

    /// Shortest chords from position `p`: paths over enclosed edges whose
    /// inner nodes are off the mortar graph. Returns distance and the
    /// predecessor (node, edge) per node.
    fn chords_from(&self, p: usize) -> (Vec<i64>, Vec<Option<(usize, EdgeId)>>) {
        let n = self.adj.len();
        let mut dist = vec![INF; n];
        let mut pred = vec![None; n];
        let mut heap = BinaryHeap::new();
        dist[p] = 0;
        heap.push(Reverse((0i64, p)));
        while let Some(Reverse((d, x))) = heap.pop() {
            if d > dist[x] || (x != p && x < self.len()) {
                continue;
            }
            for &(y, e, we) in &self.adj[x] {
                let nd = d + we;
                if nd < dist[y] {
                    dist[y] = nd;
                    pred[y] = Some((x, e));
                    heap.push(Reverse((nd, y)));
                }
            }
        }
        (dist, pred)
    }

    fn chord_edges(pred: &[Option<(usize, EdgeId)>], mut q: usize) -> Vec<EdgeId> {
        let mut out = Vec::new();
        while let Some((x, e)) = pred[q] {
            out.push(e);
            q = x;
        }
        out
    }

    /// Heaviest arc that is a shortest path in `g` (ties: earliest start,
    /// then shortest). Falls back to the empty arc at position 0.
    fn north(&self, metric: &mut Metric) -> Arc {
        let len = self.len();
        let mut best = Arc { start: 0, len: 0 };
        let mut best_w = -1i64;
        for start in 0..len {
            for steps in 1..len {
                let aw = self.arc_weight(start, steps);
                if aw <= best_w {
                    continue;
                }
                let end = self.pos_vertex[(start + steps) % len];
                if metric.dist(self.pos_vertex[start], end) == aw {
                    best = Arc { start, len: steps };
                    best_w = aw;
                }
            }
        }
        best
    }

    /// Pairs of south positions `(a, b, walk weight)` violating ε-shortness.
    fn south_violations(&self, south: Arc, eps: Weight, metric: &mut Metric) -> Vec<(usize, usize, i64, f64)> {
        let len = self.len();
        let (num, den) = (*eps.numer() as i128, *eps.denom() as i128);
        let mut out = Vec::new();
        for a in 0..=south.len {
            for b in a + 1..=south.len {
                if a == 0 && b == south.len {
                    continue;
                }
                let (p, q) = ((south.start + a) % len, (south.start + b) % len);
                let aw = self.arc_weight(p, b - a);
                let d = metric.dist(self.pos_vertex[p], self.pos_vertex[q]);
                if aw as i128 * den > (den + num) * d as i128 {
                    let ratio = if d == 0 { f64::INFINITY } else { aw as f64 / d as f64 };
                    out.push((p, q, aw, ratio));
                }
            }
        }
        out
    }
}

/// Builds the mortar graph for the terminals of `r`.
pub fn build_mortar(g: &EmbeddedMultigraph, r: &RequirementMap, opts: MortarOptions) -> Result<MortarGraph> {
    let terms = r.terminals();
    let tree = approx_steiner(g, &terms)?;
    let m = g.num_edges();
    let mut mortar = vec![false; m];
    for &e in &tree.edges {
        mortar[e] = true;
    }
    let (w, scale) = g.scaled_weights();
    let mut metric = Metric { g, w: &w, cache: HashMap::new() };
    let max_chords = opts.max_chords.unwrap_or(2 * g.num_vertices() + 16);
    let (mut closing, mut shortcut) = (0, 0);
    let mut column = 0i64;
    while !tree.edges.is_empty() && closing + shortcut < max_chords {
        let on_mortar = vertices_on(g, &mortar);
        let regions = g.regions(&mortar);
        // (is shortcut, key, edges); closing chords first, lightest first;
        // then shortcuts with the largest saving
        let mut best: Option<(bool, i64, Vec<EdgeId>)> = None;
        for (f, walk) in regions.faces.iter().enumerate() {
            if regions.interiors[f].is_empty() {
                continue;
            }
            let face = OpenFace::new(g, &w, &mortar, &on_mortar, walk, &regions.interiors[f]);
            if !simple_walk(g, walk) {
                for p in 0..face.len() {
                    let (dist, pred) = face.chords_from(p);
                    for q in 0..face.len() {
                        if q == p || dist[q] >= INF {
                            continue;
                        }
                        if best.as_ref().is_none_or(|b| b.0 || dist[q] < b.1) {
                            best = Some((false, dist[q], OpenFace::chord_edges(&pred, q)));
                        }
                    }
                }
                continue;
            }
            if best.as_ref().is_some_and(|b| !b.0) {
                continue;
            }
            let north = face.north(&mut metric);
            let south = Arc { start: (north.start + north.len) % face.len(), len: face.len() - north.len };
            let mut chords: HashMap<usize, (Vec<i64>, Vec<Option<(usize, EdgeId)>>)> = HashMap::new();
            for (p, q, aw, _) in face.south_violations(south, opts.epsilon, &mut metric) {
                let (dist, pred) = chords.entry(p).or_insert_with(|| face.chords_from(p));
                if dist[q] < aw {
                    let gain = aw - dist[q];
                    if best.as_ref().is_none_or(|b| gain > b.1) {
                        best = Some((true, gain, OpenFace::chord_edges(pred, q)));
                    }
                }
            }
        }
        let Some((is_shortcut, _, edges)) = best else { break };
        for &e in &edges {
            mortar[e] = true;
        }
        if is_shortcut {
            shortcut += 1;
            column += edges.iter().map(|&e| w[e]).sum::<i64>();
        } else {
            closing += 1;
        }
    }
    let weight = g.weight_of((0..m).filter(|&e| mortar[e]));
    let ratio = (!tree.weight.is_zero()).then(|| weight / tree.weight);
    Ok(MortarGraph {
        edges: mortar,
        weight,
        steiner_weight: tree.weight,
        ratio,
        bound: Weight::from_integer(9) / opts.epsilon,
        closing_chords: closing,
        shortcut_chords: shortcut,
        column_weight: Weight::new(column, scale),
    })
}

fn vertices_on(g: &EmbeddedMultigraph, keep: &[bool]) -> Vec<bool> {
    let mut on = vec![false; g.num_vertices()];
    for e in 0..g.num_edges() {
        if keep[e] {
            let (a, b) = g.endpoints(e);
            on[a] = true;
            on[b] = true;
        }
    }
    on
}

/// One brick per face of `mortar` (edge flags); boundary sides chosen as
/// described in the module docs, portals left empty.
pub fn extract_bricks(g: &EmbeddedMultigraph, mortar: &[bool]) -> Vec<Brick> {
    let (w, _) = g.scaled_weights();
    let mut metric = Metric { g, w: &w, cache: HashMap::new() };
    let on_mortar = vertices_on(g, mortar);
    let regions = g.regions(mortar);
    let mut bricks = Vec::new();
    for (f, walk) in regions.faces.iter().enumerate() {
        let face = OpenFace::new(g, &w, mortar, &on_mortar, walk, &regions.interiors[f]);
        let north = face.north(&mut metric);
        let len = face.len();
        let east = Arc { start: (north.start + north.len) % len, len: 0 };
        let south = Arc { start: east.start, len: len - north.len };
        let west = Arc { start: north.start, len: 0 };
        let mut interior = regions.interiors[f].clone();
        interior.sort_unstable();
        bricks.push(Brick {
            id: f,
            boundary: walk.clone(),
            interior,
            north,
            east,
            south,
            west,
            portal_positions: Vec::new(),
            portals: Vec::new(),
        });
    }
    bricks
}

/// Portal positions on the boundary walk: all positions when `theta`
/// reaches the number of distinct boundary vertices, otherwise for
/// `j = 0..theta` the first position at walk distance `>= j * W / theta`.
pub fn designate_portals(g: &EmbeddedMultigraph, brick: &mut Brick, theta: usize) {
    assert!(theta >= 1);
    let (w, _) = g.scaled_weights();
    let walk = brick.walk_vertices(g);
    let len = walk.len();
    let mut distinct = walk.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let positions: Vec<usize> = if theta >= distinct.len() {
        (0..len).collect()
    } else {
        let mut prefix = vec![0i64; len + 1];
        for i in 0..len {
            prefix[i + 1] = prefix[i] + w[edge_of(brick.boundary[i])];
        }
        let total = prefix[len] as i128;
        let mut pos = Vec::new();
        for j in 0..theta as i128 {
            // first i with prefix[i] * theta >= j * total
            if let Some(i) = (0..len).find(|&i| prefix[i] as i128 * theta as i128 >= j * total) {
                if pos.last() != Some(&i) {
                    pos.push(i);
                }
            }
        }
        pos
    };
    let mut portals = Vec::new();
    for &p in &positions {
        if !portals.contains(&walk[p]) {
            portals.push(walk[p]);
        }
    }
    brick.portal_positions = positions;
    brick.portals = portals;
}

/// Largest walk distance from a boundary position to its nearest portal
/// position, in either direction (scaled weight); `None` without portals.
pub fn max_portal_gap(g: &EmbeddedMultigraph, brick: &Brick) -> Option<i64> {
    let (w, _) = g.scaled_weights();
    let len = brick.boundary.len();
    if brick.portal_positions.is_empty() || len == 0 {
        return None;
    }
    let mut prefix = vec![0i64; len + 1];
    for i in 0..len {
        prefix[i + 1] = prefix[i] + w[edge_of(brick.boundary[i])];
    }
    let total = prefix[len];
    let fwd = |a: usize, b: usize| if b >= a { prefix[b] - prefix[a] } else { total - prefix[a] + prefix[b] };
    (0..len)
        .map(|x| brick.portal_positions.iter().map(|&y| fwd(x, y).min(fwd(y, x))).min().unwrap())
        .max()
}

#[derive(Clone, Debug, Serialize)]
pub struct BrickReport {
    pub id: usize,
    pub boundary_weight: Weight,
    pub boundary_simple: bool,
    pub interior_edges: usize,
    pub north_weight: Weight,
    pub south_weight: Weight,
    pub north_zero_short: bool,
    pub south_violations: usize,
    /// Worst walk/distance ratio on the south side (0 if none violate).
    pub south_worst_ratio: f64,
    pub terminals_on_north_south: bool,
    pub portal_count: usize,
    pub portal_gap: Option<Weight>,
    /// `boundary_weight / theta`.
    pub portal_gap_bound: Weight,
    pub portal_spacing_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MortarReport {
    pub mortar_weight: Weight,
    pub steiner_weight: Weight,
    pub ratio: Option<f64>,
    pub bound: Weight,
    pub within_bound: bool,
    pub closing_chords: usize,
    pub shortcut_chords: usize,
    pub column_weight: Weight,
    /// East and west sides are single vertices, so supercolumns weigh 0.
    pub supercolumn_weight: Weight,
    /// Edges outside the mortar graph not enclosed by any brick (other components).
    pub detached_edges: usize,
    pub interiors_partition: bool,
    pub bricks: Vec<BrickReport>,
}

/// Checks every brick contract and summarises the mortar graph.
pub fn report(
    g: &EmbeddedMultigraph,
    r: &RequirementMap,
    mg: &MortarGraph,
    bricks: &[Brick],
    theta: usize,
    epsilon: Weight,
) -> MortarReport {
    let (w, scale) = g.scaled_weights();
    let mut metric = Metric { g, w: &w, cache: HashMap::new() };
    let on_mortar = vertices_on(g, &mg.edges);
    let regions = g.regions(&mg.edges);
    let mut owner = vec![0usize; g.num_edges()];
    for b in bricks {
        for &e in &b.interior {
            owner[e] += 1;
        }
    }
    let detached = regions.detached.len();
    let interiors_partition = (0..g.num_edges())
        .all(|e| if mg.edges[e] || regions.detached.contains(&e) { owner[e] == 0 } else { owner[e] == 1 });
    let mut reports = Vec::new();
    for b in bricks {
        let face = OpenFace::new(g, &w, &mg.edges, &on_mortar, &b.boundary, &b.interior);
        let len = face.len();
        let nw = face.arc_weight(b.north.start, b.north.len);
        let sw = face.arc_weight(b.south.start, b.south.len);
        let n_end = face.pos_vertex[(b.north.start + b.north.len) % len.max(1)];
        let north_zero_short = b.north.len == 0 || metric.dist(face.pos_vertex[b.north.start], n_end) == nw;
        let viol = face.south_violations(b.south, epsilon, &mut metric);
        let worst = viol.iter().map(|v| v.3).fold(0.0, f64::max);
        let mut ns = b.arc_vertices(g, b.north);
        ns.extend(b.arc_vertices(g, b.south));
        let terminals_on_north_south = b
            .edges()
            .iter()
            .flat_map(|&e| [g.endpoints(e).0, g.endpoints(e).1])
            .filter(|&v| r.get(v) > 0)
            .all(|v| ns.contains(&v));
        let total = face.arc_weight(0, len);
        let gap = max_portal_gap(g, b);
        let portal_spacing_ok = gap.is_none_or(|x| x as i128 * theta as i128 <= total as i128);
        reports.push(BrickReport {
            id: b.id,
            boundary_weight: Weight::new(total, scale),
            boundary_simple: b.is_simple_cycle(g),
            interior_edges: b.interior.len(),
            north_weight: Weight::new(nw, scale),
            south_weight: Weight::new(sw, scale),
            north_zero_short,
            south_violations: viol.len(),
            south_worst_ratio: worst,
            terminals_on_north_south,
            portal_count: b.portals.len(),
            portal_gap: gap.map(|x| Weight::new(x, scale)),
            portal_gap_bound: Weight::new(total, scale) / Weight::from_integer(theta as i64),
            portal_spacing_ok,
        });
    }
    MortarReport {
        mortar_weight: mg.weight,
        steiner_weight: mg.steiner_weight,
        ratio: mg.ratio.and_then(|x| x.to_f64()),
        bound: mg.bound,
        within_bound: mg.ratio.is_none_or(|x| x <= mg.bound),
        closing_chords: mg.closing_chords,
        shortcut_chords: mg.shortcut_chords,
        column_weight: mg.column_weight,
        supercolumn_weight: Weight::zero(),
        detached_edges: detached,
        interiors_partition,
        bricks: reports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn half() -> Weight {
        Weight::new(1, 2)
    }

    fn req(n: usize, terms: &[(VertexId, u8)]) -> RequirementMap {
        let mut r = RequirementMap::zeros(n);
        for &(v, x) in terms {
            r.set(v, x);
        }
        r
    }

    fn check_all(g: &EmbeddedMultigraph, r: &RequirementMap, eps: Weight) -> MortarReport {
        let mg = build_mortar(g, r, MortarOptions::new(eps)).unwrap();
        let theta = default_theta(eps);
        let mut bricks = extract_bricks(g, &mg.edges);
        for b in &mut bricks {
            designate_portals(g, b, theta);
        }
        for t in r.terminals() {
            assert!(mg.edge_list().iter().any(|&e| g.endpoints(e).0 == t || g.endpoints(e).1 == t) || r.terminals().len() < 2);
        }
        let rep = report(g, r, &mg, &bricks, theta, eps);
        assert!(rep.interiors_partition);
        for b in &rep.bricks {
            assert!(b.north_zero_short);
            assert!(b.terminals_on_north_south);
            assert!(b.portal_spacing_ok);
        }
        rep
    }

    #[test]
    fn tree_and_cycle() {
        let g = path(4);
        let r = req(4, &[(0, 1), (3, 2)]);
        let mg = build_mortar(&g, &r, MortarOptions::new(half())).unwrap();
        assert_eq!(mg.edge_list(), vec![0, 1, 2]);
        let bricks = extract_bricks(&g, &mg.edges);
        assert_eq!(bricks.len(), 1);
        assert!(bricks[0].interior.is_empty());

        let g = cycle(6);
        let r = req(6, &[(0, 1), (2, 1)]);
        let mg = build_mortar(&g, &r, MortarOptions::new(half())).unwrap();
        assert!(mg.edges.iter().all(|&x| x));
        let bricks = extract_bricks(&g, &mg.edges);
        assert_eq!(bricks.len(), 2);
        assert!(bricks.iter().all(|b| b.interior.is_empty()));
        check_all(&g, &r, half());
    }

    #[test]
    fn grid_corners() {
        let g = grid(4, 4);
        let r = req(16, &[(0, 1), (3, 1), (12, 1), (15, 1)]);
        let rep = check_all(&g, &r, half());
        assert!(rep.within_bound, "ratio {:?}", rep.ratio);
        assert_eq!(rep.bound, Weight::from_integer(18));
    }

    #[test]
    fn fixed_mortar_graphs() {
        let g = grid(3, 3);
        let all = vec![true; g.num_edges()];
        assert!(extract_bricks(&g, &all).iter().all(|b| b.interior.is_empty()));
        let mut outer = vec![false; g.num_edges()];
        for f in g.faces() {
            if f.len() == 8 {
                for d in f {
                    outer[edge_of(d)] = true;
                }
            }
        }
        let bricks = extract_bricks(&g, &outer);
        let inner: Vec<&Brick> = bricks.iter().filter(|b| !b.interior.is_empty()).collect();
        assert_eq!(inner.len(), 1);
        assert_eq!(inner[0].interior.len(), 4);

        let g = wheel(5);
        let rim: Vec<bool> = (0..g.num_edges()).map(|e| { let (a, b) = g.endpoints(e); a.max(b) < 5 }).collect();
        let bricks = extract_bricks(&g, &rim);
        let inner: Vec<&Brick> = bricks.iter().filter(|b| !b.interior.is_empty()).collect();
        assert_eq!(inner.len(), 1);
        assert_eq!(inner[0].interior.len(), 5);
    }

    fn cycle_brick(g: &EmbeddedMultigraph) -> Brick {
        let all = vec![true; g.num_edges()];
        extract_bricks(g, &all).remove(0)
    }

    #[test]
    fn portal_examples() {
        let g = cycle(8);
        let mut b = cycle_brick(&g);
        designate_portals(&g, &mut b, 4);
        assert_eq!(b.portal_positions, vec![0, 2, 4, 6]);
        assert_eq!(max_portal_gap(&g, &b), Some(1));
        designate_portals(&g, &mut b, 8);
        assert_eq!(b.portals.len(), 8);

        let ws = [5, 1, 1, 1];
        let g = cycle_with(4, |u, v| Weight::from_integer(ws[if (u + 1) % 4 == v { u } else { v }]));
        let mut b = cycle_brick(&g);
        designate_portals(&g, &mut b, 2);
        assert!(b.portals.len() <= 2);
        let total = b.boundary_weight(&g);
        assert_eq!(total, Weight::from_integer(8));
        assert!(Weight::from_integer(max_portal_gap(&g, &b).unwrap() * 2) <= total);
    }

    #[test]
    fn theta_defaults() {
        assert_eq!(default_theta(half()), 8);
        assert_eq!(default_theta(Weight::new(1, 4)), 16);
        assert_eq!(default_theta(Weight::new(9, 10)), 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]
        #[test]
        fn contracts_on_random_triangulations(seed in 0u64..100_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(4..25);
            let g = random_triangulation(n, 1, 9, &mut rng);
            let g = thin_connected(&g, 0.3, &mut rng);
            let mut terms: Vec<(VertexId, u8)> = Vec::new();
            for v in 0..n {
                if rng.gen_bool(0.3) {
                    terms.push((v, rng.gen_range(1..=3)));
                }
            }
            let r = req(n, &terms);
            let eps = if rng.gen_bool(0.5) { half() } else { Weight::new(1, 4) };
            check_all(&g, &r, eps);
        }
    }
}
