//! Pairwise edge and vertex connectivity, feasibility and minimality.
//!
//! Solutions are multiplicity vectors over the edges of a host graph; every
//! copy of an edge is one unit of capacity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EmbeddedMultigraph, MultiSolution, RequirementMap, VertexId};

const INF: u32 = u32::MAX / 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Edge,
    Vertex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectivityReport {
    pub pair: (VertexId, VertexId),
    pub lambda: u32,
    pub kappa: Option<u32>,
}

/// Residual network with paired arcs (`a ^ 1` is the reverse of `a`).
#[derive(Clone, Debug)]
pub(crate) struct Flow {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
    base: Vec<u32>,
    // scratch
    pred: Vec<usize>,
    queue: Vec<usize>,
}

impl Flow {
    pub(crate) fn new(n: usize) -> Self {
        Flow { adj: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new(), base: Vec::new(), pred: vec![0; n], queue: Vec::new() }
    }

    /// Undirected edge: both arcs carry `c`.
    pub(crate) fn add_undirected(&mut self, u: usize, v: usize, c: u32) {
        self.add_pair(u, v, c, c);
    }

    pub(crate) fn add_directed(&mut self, u: usize, v: usize, c: u32) {
        self.add_pair(u, v, c, 0);
    }

    fn add_pair(&mut self, u: usize, v: usize, c1: u32, c2: u32) {
        let a = self.to.len();
        self.to.push(v);
        self.cap.push(c1);
        self.to.push(u);
        self.cap.push(c2);
        self.adj[u].push(a);
        self.adj[v].push(a + 1);
    }

    pub(crate) fn freeze(&mut self) {
        self.base = self.cap.clone();
    }

    pub(crate) fn reset(&mut self) {
        self.cap.copy_from_slice(&self.base);
    }

    /// Max flow from `s` to `t`, stopping once `limit` is reached.
    pub(crate) fn max_flow(&mut self, s: usize, t: usize, limit: u32) -> u32 {
        let n = self.adj.len();
        let mut total = 0;
        while total < limit {
            self.pred.iter_mut().for_each(|p| *p = usize::MAX);
            self.pred[s] = usize::MAX - 1;
            self.queue.clear();
            self.queue.push(s);
            let mut head = 0;
            'bfs: while head < self.queue.len() {
                let x = self.queue[head];
                head += 1;
                for &a in &self.adj[x] {
                    let y = self.to[a];
                    if self.cap[a] > 0 && self.pred[y] == usize::MAX {
                        self.pred[y] = a;
                        if y == t {
                            break 'bfs;
                        }
                        self.queue.push(y);
                    }
                }
            }
            if self.pred[t] == usize::MAX {
                break;
            }
            let mut push = limit - total;
            let mut y = t;
            while y != s {
                let a = self.pred[y];
                push = push.min(self.cap[a]);
                y = self.to[a ^ 1];
            }
            let mut y = t;
            while y != s {
                let a = self.pred[y];
                self.cap[a] -= push;
                self.cap[a ^ 1] += push;
                y = self.to[a ^ 1];
            }
            total += push;
        }
        debug_assert!(n == self.pred.len());
        total
    }
}

fn check_pair(g: &EmbeddedMultigraph, u: VertexId, v: VertexId) -> Result<()> {
    if u == v {
        return Err(Error::InvalidQuery(format!("connectivity of vertex {u} with itself")));
    }
    if u >= g.num_vertices() || v >= g.num_vertices() {
        return Err(Error::InvalidQuery("vertex out of range".into()));
    }
    Ok(())
}

fn edge_network(g: &EmbeddedMultigraph, mult: &[u8]) -> Flow {
    let mut f = Flow::new(g.num_vertices());
    for e in 0..g.num_edges() {
        if mult[e] > 0 {
            let (a, b) = g.endpoints(e);
            f.add_undirected(a, b, mult[e] as u32);
        }
    }
    f.freeze();
    f
}

/// Vertex `x` becomes `x_in = 2x` and `x_out = 2x + 1`.
fn vertex_network(g: &EmbeddedMultigraph, mult: &[u8]) -> Flow {
    let n = g.num_vertices();
    let mut f = Flow::new(2 * n);
    for x in 0..n {
        f.add_directed(2 * x, 2 * x + 1, 1);
    }
    for e in 0..g.num_edges() {
        if mult[e] > 0 {
            let (a, b) = g.endpoints(e);
            let c = mult[e] as u32;
            f.add_directed(2 * a + 1, 2 * b, c);
            f.add_directed(2 * b + 1, 2 * a, c);
        }
    }
    f.freeze();
    f
}

/// Maximum number of edge-disjoint `u`-`v` paths using `mult[e]` copies of edge `e`.
pub fn edge_connectivity(g: &EmbeddedMultigraph, mult: &[u8], u: VertexId, v: VertexId) -> Result<u32> {
    check_pair(g, u, v)?;
    Ok(edge_network(g, mult).max_flow(u, v, INF))
}

/// Maximum number of internally vertex-disjoint `u`-`v` paths. Direct `u`-`v`
/// edges count once per copy.
pub fn vertex_connectivity(g: &EmbeddedMultigraph, mult: &[u8], u: VertexId, v: VertexId) -> Result<u32> {
    check_pair(g, u, v)?;
    let mut f = vertex_network(g, mult);
    Ok(f.max_flow(2 * u + 1, 2 * v, INF))
}

pub fn report(
    g: &EmbeddedMultigraph,
    mult: &[u8],
    u: VertexId,
    v: VertexId,
    with_kappa: bool,
) -> Result<ConnectivityReport> {
    let lambda = edge_connectivity(g, mult, u, v)?;
    let kappa = if with_kappa { Some(vertex_connectivity(g, mult, u, v)?) } else { None };
    Ok(ConnectivityReport { pair: (u.min(v), u.max(v)), lambda, kappa })
}

/// A terminal pair whose requirement is not met, with `(need, have)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub u: VertexId,
    pub v: VertexId,
    pub need: u32,
    pub have: u32,
}

/// Reusable feasibility checker for one host graph and requirement map.
pub struct Checker<'a> {
    g: &'a EmbeddedMultigraph,
    pairs: Vec<(VertexId, VertexId, u32)>,
    mode: Mode,
}

impl<'a> Checker<'a> {
    pub fn new(g: &'a EmbeddedMultigraph, r: &RequirementMap, mode: Mode) -> Self {
        let mut pairs: Vec<(VertexId, VertexId, u32)> =
            r.demand_pairs().into_iter().map(|(u, v, k)| (u, v, k as u32)).collect();
        // Check demanding pairs first; they fail fastest.
        pairs.sort_by(|a, b| b.2.cmp(&a.2).then((a.0, a.1).cmp(&(b.0, b.1))));
        Checker { g, pairs, mode }
    }

    pub fn first_violation(&self, mult: &[u8]) -> Option<Violation> {
        if self.pairs.is_empty() {
            return None;
        }
        let n = self.g.num_vertices();
        // Cheap necessary condition: capacity at each endpoint.
        let mut cap = vec![0u32; n];
        for e in 0..self.g.num_edges() {
            if mult[e] > 0 {
                let (a, b) = self.g.endpoints(e);
                cap[a] += mult[e] as u32;
                cap[b] += mult[e] as u32;
            }
        }
        let cheap = self.pairs.iter().position(|&(u, v, need)| cap[u].min(cap[v]) < need);
        let mut f = match self.mode {
            Mode::Edge => edge_network(self.g, mult),
            Mode::Vertex => vertex_network(self.g, mult),
        };
        let pairs = match cheap {
            Some(i) => &self.pairs[i..=i],
            None => &self.pairs[..],
        };
        for &(u, v, need) in pairs {
            f.reset();
            let have = match self.mode {
                Mode::Edge => f.max_flow(u, v, need),
                Mode::Vertex => f.max_flow(2 * u + 1, 2 * v, need),
            };
            if have < need {
                return Some(Violation { u, v, need, have });
            }
        }
        None
    }

    pub fn feasible(&self, mult: &[u8]) -> bool {
        self.first_violation(mult).is_none()
    }

    /// Greedy copy removal in the given edge order.
    pub fn minimalize_in_order(&self, mult: &[u8], order: &[EdgeId]) -> Result<Vec<u8>> {
        if let Some(x) = self.first_violation(mult) {
            return Err(Error::Infeasible(format!(
                "cannot minimalize an infeasible solution: pair ({}, {}) needs {} has {}",
                x.u, x.v, x.need, x.have
            )));
        }
        let mut cur = mult.to_vec();
        // Feasibility is monotone, so one pass leaves no removable copy.
        for &e in order {
            while cur[e] > 0 {
                cur[e] -= 1;
                if !self.feasible(&cur) {
                    cur[e] += 1;
                    break;
                }
            }
        }
        Ok(cur)
    }

    /// Removal order: nonincreasing weight, ties by edge id.
    pub fn minimalize(&self, mult: &[u8]) -> Result<Vec<u8>> {
        let order = heavy_first(self.g);
        self.minimalize_in_order(mult, &order)
    }

    /// True iff removing any single copy breaks feasibility.
    pub fn is_minimal(&self, mult: &[u8]) -> bool {
        let mut cur = mult.to_vec();
        (0..cur.len()).all(|e| {
            if cur[e] == 0 {
                return true;
            }
            cur[e] -= 1;
            let ok = !self.feasible(&cur);
            cur[e] += 1;
            ok
        })
    }
}

pub fn heavy_first(g: &EmbeddedMultigraph) -> Vec<EdgeId> {
    let mut order: Vec<EdgeId> = (0..g.num_edges()).collect();
    order.sort_by(|&a, &b| g.weight(b).cmp(&g.weight(a)).then(a.cmp(&b)));
    order
}

/// Every terminal pair `(u, v)` has `min(r(u), r(v))` edge-disjoint paths in `sol`.
pub fn is_feasible(g: &EmbeddedMultigraph, sol: &MultiSolution, r: &RequirementMap) -> bool {
    Checker::new(g, r, Mode::Edge).feasible(&sol.mult)
}

pub fn first_violation(g: &EmbeddedMultigraph, mult: &[u8], r: &RequirementMap) -> Option<Violation> {
    Checker::new(g, r, Mode::Edge).first_violation(mult)
}

pub fn minimalize(g: &EmbeddedMultigraph, sol: &MultiSolution, r: &RequirementMap) -> Result<MultiSolution> {
    let mult = Checker::new(g, r, Mode::Edge).minimalize(&sol.mult)?;
    MultiSolution::new(mult, sol.k)
}

/// True iff the instance has any feasible solution with multiplicities up to `k`.
pub fn instance_feasible(g: &EmbeddedMultigraph, r: &RequirementMap, k: u8) -> bool {
    Checker::new(g, r, Mode::Edge).feasible(&vec![k; g.num_edges()])
}
