//! Empirical checks of the structural theorems on minimal vertex-connected
//! subgraphs: cycles meet terminals, and disjoint path systems whose
//! connecting paths all pass through terminals.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::connectivity::{Checker, Mode};
use crate::graph::generators::{random_triangulation, thin_connected};
use crate::graph::io::write_graph;
use crate::graph::{EdgeId, EmbeddedMultigraph, RequirementMap, VertexId};

/// Cycle enumeration is exponential; it is refused above this many vertices.
pub const CYCLE_VERTEX_CAP: usize = 12;

/// A simple cycle as parallel vertex and edge sequences (`edges[i]` joins
/// `vertices[i]` and `vertices[i + 1]`, cyclically).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

/// Every simple cycle of the subgraph `keep`, once each. Cycles start at
/// their smallest vertex and are oriented so the first edge id is below
/// the last.
pub fn simple_cycles(g: &EmbeddedMultigraph, keep: &[bool]) -> Vec<Cycle> {
    assert!(g.num_vertices() <= CYCLE_VERTEX_CAP, "cycle enumeration is capped at {CYCLE_VERTEX_CAP} vertices");
    let mut out = Vec::new();
    let mut on = vec![false; g.num_vertices()];
    for s in 0..g.num_vertices() {
        on[s] = true;
        let mut c = Cycle { vertices: vec![s], edges: Vec::new() };
        cycles_from(g, keep, s, s, &mut on, &mut c, &mut out);
        on[s] = false;
    }
    out
}

fn cycles_from(
    g: &EmbeddedMultigraph,
    keep: &[bool],
    s: VertexId,
    at: VertexId,
    on: &mut [bool],
    cur: &mut Cycle,
    out: &mut Vec<Cycle>,
) {
    for e in g.incident_edges(at) {
        if !keep[e] || cur.edges.contains(&e) {
            continue;
        }
        let to = g.other_end(e, at);
        if to == at {
            continue;
        }
        if to == s {
            if !cur.edges.is_empty() && cur.edges[0] < e {
                let mut c = cur.clone();
                c.edges.push(e);
                out.push(c);
            }
            continue;
        }
        if to < s || on[to] {
            continue;
        }
        on[to] = true;
        cur.vertices.push(to);
        cur.edges.push(e);
        cycles_from(g, keep, s, to, on, cur, out);
        cur.vertices.pop();
        cur.edges.pop();
        on[to] = false;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    /// The host graph and requirements in the text format.
    pub graph: String,
    pub subgraph: Vec<EdgeId>,
    pub cycle: Cycle,
    pub terminals_on_cycle: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub instances: usize,
    pub cycles_checked: usize,
    pub violations: Vec<Witness>,
    /// Generated instances dropped because the requirements were unmet.
    pub discarded: usize,
}

impl TheoremReport {
    fn new(theorem: &str) -> Self {
        TheoremReport { theorem: theorem.into(), ..Default::default() }
    }

    fn absorb(&mut self, other: TheoremReport) {
        self.instances += other.instances;
        self.cycles_checked += other.cycles_checked;
        self.violations.extend(other.violations);
        self.discarded += other.discarded;
    }
}

pub const CYCLE_TERMINAL: &str = "every-cycle-contains-a-terminal";
pub const TWO_TERMINALS: &str = "every-cycle-contains-two-terminals";
pub const CONNECTING_PATH: &str = "connecting-paths-contain-terminals";

fn check_cycles(g: &EmbeddedMultigraph, r: &RequirementMap, sub: &[EdgeId], need: usize, theorem: &str) -> TheoremReport {
    let mut keep = vec![false; g.num_edges()];
    for &e in sub {
        keep[e] = true;
    }
    let mut rep = TheoremReport::new(theorem);
    rep.instances = 1;
    for c in simple_cycles(g, &keep) {
        rep.cycles_checked += 1;
        let t = c.vertices.iter().filter(|&&v| r.get(v) > 0).count();
        if t < need {
            rep.violations.push(Witness { graph: write_graph(g, r), subgraph: sub.to_vec(), cycle: c, terminals_on_cycle: t });
        }
    }
    rep
}

/// Every simple cycle of the minimal subgraph `sub` contains a terminal.
pub fn check_cycle_terminal(g: &EmbeddedMultigraph, r: &RequirementMap, sub: &[EdgeId]) -> TheoremReport {
    check_cycles(g, r, sub, 1, CYCLE_TERMINAL)
}

/// Every simple cycle of the minimal triconnecting subgraph `sub` contains
/// at least two terminals.
pub fn check_two_terminals_per_cycle(g: &EmbeddedMultigraph, r: &RequirementMap, sub: &[EdgeId]) -> TheoremReport {
    check_cycles(g, r, sub, 2, TWO_TERMINALS)
}

/// Re-checks a witness from scratch: a closed walk in the subgraph without
/// repeated vertices, carrying too few terminals.
pub fn verify_witness(g: &EmbeddedMultigraph, r: &RequirementMap, w: &Witness, need: usize) -> bool {
    let c = &w.cycle;
    let len = c.vertices.len();
    if len == 0 || c.edges.len() != len {
        return false;
    }
    let distinct: BTreeSet<VertexId> = c.vertices.iter().copied().collect();
    let edges: BTreeSet<EdgeId> = c.edges.iter().copied().collect();
    if distinct.len() != len || edges.len() != len {
        return false;
    }
    let joins = (0..len).all(|i| {
        let e = c.edges[i];
        let (a, b) = (c.vertices[i], c.vertices[(i + 1) % len]);
        w.subgraph.contains(&e) && (g.endpoints(e) == (a, b) || g.endpoints(e) == (b, a))
    });
    joins && c.vertices.iter().filter(|&&v| r.get(v) > 0).count() < need
}

/// All simple `x`-`y` paths of the subgraph, as vertex sequences plus edges.
fn simple_paths(g: &EmbeddedMultigraph, keep: &[bool], x: VertexId, y: VertexId) -> Vec<(Vec<VertexId>, Vec<EdgeId>)> {
    fn rec(
        g: &EmbeddedMultigraph,
        keep: &[bool],
        y: VertexId,
        on: &mut [bool],
        vs: &mut Vec<VertexId>,
        es: &mut Vec<EdgeId>,
        out: &mut Vec<(Vec<VertexId>, Vec<EdgeId>)>,
    ) {
        let at = *vs.last().unwrap();
        if at == y {
            out.push((vs.clone(), es.clone()));
            return;
        }
        for e in g.incident_edges(at) {
            let to = g.other_end(e, at);
            if !keep[e] || on[to] {
                continue;
            }
            on[to] = true;
            vs.push(to);
            es.push(e);
            rec(g, keep, y, on, vs, es, out);
            vs.pop();
            es.pop();
            on[to] = false;
        }
    }
    let mut on = vec![false; g.num_vertices()];
    on[x] = true;
    let mut out = Vec::new();
    rec(g, keep, y, &mut on, &mut vec![x], &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathCheck {
    /// A system of disjoint paths whose connecting paths all contain a terminal.
    Pass { paths: Vec<Vec<VertexId>> },
    /// Every system has a terminal-free connecting path.
    Fail,
    /// Budget ran out before a passing system was found.
    Unknown,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PathSystems {
    pub systems: usize,
    pub passing: usize,
    /// One failing system and its terminal-free connecting path, if any.
    pub failing_example: Option<(Vec<Vec<VertexId>>, Vec<VertexId>)>,
    pub first_passing: Option<Vec<Vec<VertexId>>>,
    pub exhausted: bool,
}

/// A connecting path of a path system with no terminal on it: a path
/// between internal vertices of two different paths whose interior avoids
/// the system. Endpoints count as vertices of the connecting path.
fn terminal_free_connection(
    g: &EmbeddedMultigraph,
    keep: &[bool],
    r: &RequirementMap,
    system: &[&Vec<VertexId>],
) -> Option<Vec<VertexId>> {
    let n = g.num_vertices();
    // owner[v] = index of the system path through v (x and y excluded)
    let mut owner = vec![usize::MAX; n];
    let mut on_system = vec![false; n];
    for (i, p) in system.iter().enumerate() {
        for &v in p.iter() {
            on_system[v] = true;
        }
        for &v in &p[1..p.len() - 1] {
            owner[v] = i;
        }
    }
    let free = |v: VertexId| r.get(v) == 0;
    // search from each terminal-free inner vertex through terminal-free vertices off the system
    for start in 0..n {
        if owner[start] == usize::MAX || !free(start) {
            continue;
        }
        let mut prev = vec![usize::MAX; n];
        prev[start] = start;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(at) = queue.pop_front() {
            for e in g.incident_edges(at) {
                if !keep[e] {
                    continue;
                }
                let to = g.other_end(e, at);
                if prev[to] != usize::MAX || !free(to) {
                    continue;
                }
                if owner[to] != usize::MAX && owner[to] != owner[start] {
                    let mut path = vec![to];
                    let mut x = at;
                    while x != start {
                        path.push(x);
                        x = prev[x];
                    }
                    path.push(start);
                    path.reverse();
                    return Some(path);
                }
                if on_system[to] {
                    continue;
                }
                prev[to] = at;
                queue.push_back(to);
            }
        }
    }
    None
}

/// Enumerates systems of `p` internally vertex-disjoint `x`-`y` paths in the
/// subgraph and checks each for terminal-free connecting paths.
pub fn path_systems(
    g: &EmbeddedMultigraph,
    r: &RequirementMap,
    sub: &[EdgeId],
    x: VertexId,
    y: VertexId,
    p: usize,
    budget: usize,
    stop_at_pass: bool,
) -> PathSystems {
    let mut keep = vec![false; g.num_edges()];
    for &e in sub {
        keep[e] = true;
    }
    let paths = simple_paths(g, &keep, x, y);
    let mut out = PathSystems::default();
    let mut chosen: Vec<usize> = Vec::new();
    let mut used = vec![false; g.num_vertices()];
    let mut used_edge = vec![false; g.num_edges()];
    out.exhausted = systems_rec(g, &keep, r, &paths, p, 0, &mut chosen, &mut used, &mut used_edge, budget, stop_at_pass, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn systems_rec(
    g: &EmbeddedMultigraph,
    keep: &[bool],
    r: &RequirementMap,
    paths: &[(Vec<VertexId>, Vec<EdgeId>)],
    p: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    used: &mut [bool],
    used_edge: &mut [bool],
    budget: usize,
    stop_at_pass: bool,
    out: &mut PathSystems,
) -> bool {
    if chosen.len() == p {
        if out.systems >= budget {
            return false;
        }
        out.systems += 1;
        let sys: Vec<&Vec<VertexId>> = chosen.iter().map(|&i| &paths[i].0).collect();
        match terminal_free_connection(g, keep, r, &sys) {
            None => {
                out.passing += 1;
                if out.first_passing.is_none() {
                    out.first_passing = Some(sys.iter().map(|p| p.to_vec()).collect());
                }
            }
            Some(cp) => {
                if out.failing_example.is_none() {
                    out.failing_example = Some((sys.iter().map(|p| p.to_vec()).collect(), cp));
                }
            }
        }
        return true;
    }
    for i in from..paths.len() {
        if stop_at_pass && out.passing > 0 {
            return true;
        }
        let (vs, es) = &paths[i];
        let inner = &vs[1..vs.len() - 1];
        if inner.iter().any(|&v| used[v]) || es.iter().any(|&e| used_edge[e]) {
            continue;
        }
        for &v in inner {
            used[v] = true;
        }
        for &e in es {
            used_edge[e] = true;
        }
        chosen.push(i);
        let ok = systems_rec(g, keep, r, paths, p, i + 1, chosen, used, used_edge, budget, stop_at_pass, out);
        chosen.pop();
        for &v in inner {
            used[v] = false;
        }
        for &e in es {
            used_edge[e] = false;
        }
        if !ok {
            return false;
        }
    }
    true
}

/// Looks for `min(r(x), r(y))` disjoint `x`-`y` paths in `sub` every
/// connecting path of which contains a terminal. Never reports `Fail`
/// unless every system was examined.
pub fn check_connecting_path_terminal(
    g: &EmbeddedMultigraph,
    r: &RequirementMap,
    sub: &[EdgeId],
    x: VertexId,
    y: VertexId,
    budget: usize,
) -> PathCheck {
    let p = r.get(x).min(r.get(y)) as usize;
    let s = path_systems(g, r, sub, x, y, p, budget, true);
    match (s.first_passing, s.exhausted) {
        (Some(paths), _) => PathCheck::Pass { paths },
        (None, true) => PathCheck::Fail,
        (None, false) => PathCheck::Unknown,
    }
}

/// Random minimal instance: a thinned triangulation, random terminals and
/// a random-order vertex-mode minimalization. `None` if the host graph
/// misses the requirements.
pub fn random_minimal_instance(
    n: usize,
    terminals: usize,
    levels: &[u8],
    rng: &mut ChaCha8Rng,
) -> Option<(EmbeddedMultigraph, RequirementMap, Vec<EdgeId>)> {
    let g = random_triangulation(n, 1, 9, rng);
    let g = if rng.gen_bool(0.5) { thin_connected(&g, 0.2, rng) } else { g };
    let mut vs: Vec<VertexId> = (0..n).collect();
    vs.shuffle(rng);
    let mut r = RequirementMap::zeros(n);
    for &v in vs.iter().take(terminals) {
        r.set(v, *levels.choose(rng).unwrap());
    }
    let checker = Checker::new(&g, &r, Mode::Vertex);
    let all = vec![1u8; g.num_edges()];
    if !checker.feasible(&all) {
        return None;
    }
    let mut order: Vec<EdgeId> = (0..g.num_edges()).collect();
    order.shuffle(rng);
    let mult = checker.minimalize_in_order(&all, &order).ok()?;
    debug_assert!(checker.is_minimal(&mult));
    let sub = (0..g.num_edges()).filter(|&e| mult[e] > 0).collect();
    Some((g, r, sub))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectingPathReport {
    pub theorem: String,
    pub pairs_checked: usize,
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LabReport {
    pub seed: u64,
    pub cycle_terminal: TheoremReport,
    pub two_terminals: TheoremReport,
    pub connecting_paths: ConnectingPathReport,
}

#[derive(Clone, Copy, Debug)]
pub struct LabOptions {
    pub seed: u64,
    /// Minimal instances checked per cycle theorem.
    pub instances: usize,
    pub max_vertices: usize,
    /// Instances for the connecting path check (at most 9 vertices).
    pub path_instances: usize,
    pub path_budget: usize,
}

impl Default for LabOptions {
    fn default() -> Self {
        LabOptions { seed: 0, instances: 500, max_vertices: 10, path_instances: 100, path_budget: 200_000 }
    }
}

fn generate(
    seed: u64,
    count: usize,
    max_n: usize,
    levels: &'static [u8],
    min_terminals: usize,
) -> (Vec<(EmbeddedMultigraph, RequirementMap, Vec<EdgeId>)>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut discarded = 0;
    while out.len() < count {
        let n = rng.gen_range(5..=max_n);
        let t = rng.gen_range(min_terminals..=4.min(n));
        match random_minimal_instance(n, t, levels, &mut rng) {
            Some(x) => out.push(x),
            None => discarded += 1,
        }
    }
    (out, discarded)
}

/// Runs both cycle theorems and the connecting path check on freshly
/// generated minimal instances.
pub fn run_lab(opts: LabOptions) -> LabReport {
    let max_n = opts.max_vertices.min(CYCLE_VERTEX_CAP);
    let (inst, discarded) = generate(opts.seed, opts.instances, max_n, &[2, 3], 2);
    let mut cycle_terminal = TheoremReport::new(CYCLE_TERMINAL);
    cycle_terminal.discarded = discarded;
    for rep in inst.par_iter().map(|(g, r, s)| check_cycle_terminal(g, r, s)).collect::<Vec<_>>() {
        cycle_terminal.absorb(rep);
    }
    let (inst, discarded) = generate(opts.seed ^ 0x9e37_79b9, opts.instances, max_n, &[3], 2);
    let mut two_terminals = TheoremReport::new(TWO_TERMINALS);
    two_terminals.discarded = discarded;
    for rep in inst.par_iter().map(|(g, r, s)| check_two_terminals_per_cycle(g, r, s)).collect::<Vec<_>>() {
        two_terminals.absorb(rep);
    }
    let (inst, _) = generate(opts.seed ^ 0x5bd1_e995, opts.path_instances, max_n.min(9), &[2, 3], 2);
    let results: Vec<Vec<(PathCheck, String)>> = inst
        .par_iter()
        .map(|(g, r, s)| {
            let ts = r.terminals();
            let mut res = Vec::new();
            for (i, &x) in ts.iter().enumerate() {
                for &y in &ts[i + 1..] {
                    let c = check_connecting_path_terminal(g, r, s, x, y, opts.path_budget);
                    res.push((c, format!("{}pair {x} {y}", write_graph(g, r))));
                }
            }
            res
        })
        .collect();
    let mut cp = ConnectingPathReport {
        theorem: CONNECTING_PATH.into(),
        pairs_checked: 0,
        pass: 0,
        fail: 0,
        unknown: 0,
        failures: Vec::new(),
    };
    for (c, dump) in results.into_iter().flatten() {
        cp.pairs_checked += 1;
        match c {
            PathCheck::Pass { .. } => cp.pass += 1,
            PathCheck::Fail => {
                cp.fail += 1;
                cp.failures.push(dump);
            }
            PathCheck::Unknown => cp.unknown += 1,
        }
    }
    LabReport { seed: opts.seed, cycle_terminal, two_terminals, connecting_paths: cp }
}

/// Lab checks on one given graph: the requirements are minimalized in
/// vertex mode (heaviest edges dropped first) and every theorem is checked.
pub fn lab_on_graph(g: &EmbeddedMultigraph, r: &RequirementMap, budget: usize) -> crate::Result<LabReport> {
    let checker = Checker::new(g, r, Mode::Vertex);
    let mult = checker.minimalize(&vec![1u8; g.num_edges()])?;
    let sub: Vec<EdgeId> = (0..g.num_edges()).filter(|&e| mult[e] > 0).collect();
    let mut cycle_terminal = check_cycle_terminal(g, r, &sub);
    let mut two_terminals = TheoremReport::new(TWO_TERMINALS);
    let all_three = r.terminals().iter().all(|&v| r.get(v) == 3);
    if all_three {
        two_terminals = check_two_terminals_per_cycle(g, r, &sub);
    }
    if r.terminals().iter().any(|&v| r.get(v) < 2) {
        cycle_terminal = TheoremReport::new(CYCLE_TERMINAL);
    }
    let ts = r.terminals();
    let mut cp = ConnectingPathReport { theorem: CONNECTING_PATH.into(), pairs_checked: 0, pass: 0, fail: 0, unknown: 0, failures: Vec::new() };
    if g.num_vertices() <= 9 {
        for (i, &x) in ts.iter().enumerate() {
            for &y in &ts[i + 1..] {
                if r.get(x).min(r.get(y)) < 2 {
                    continue;
                }
                cp.pairs_checked += 1;
                match check_connecting_path_terminal(g, r, &sub, x, y, budget) {
                    PathCheck::Pass { .. } => cp.pass += 1,
                    PathCheck::Fail => {
                        cp.fail += 1;
                        cp.failures.push(format!("pair {x} {y}"));
                    }
                    PathCheck::Unknown => cp.unknown += 1,
                }
            }
        }
    }
    Ok(LabReport { seed: 0, cycle_terminal, two_terminals, connecting_paths: cp })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;
    use crate::graph::io::parse_graph;
    use proptest::prelude::*;
    use rand::Rng;

    fn req(n: usize, terms: &[(VertexId, u8)]) -> RequirementMap {
        let mut r = RequirementMap::zeros(n);
        for &(v, x) in terms {
            r.set(v, x);
        }
        r
    }

    fn all(g: &EmbeddedMultigraph) -> Vec<EdgeId> {
        (0..g.num_edges()).collect()
    }

    fn theta() -> EmbeddedMultigraph {
        // branch vertices 0 and 1, middles 2, 3, 4
        EmbeddedMultigraph::from_faces(5, &[vec![0, 2, 1, 3], vec![0, 3, 1, 4], vec![0, 4, 1, 2]], |_, _| crate::Weight::from_integer(1)).unwrap()
    }

    #[test]
    fn cycle_examples() {
        let g = cycle(5);
        let rep = check_cycle_terminal(&g, &req(5, &[(0, 2), (3, 2)]), &all(&g));
        assert_eq!((rep.cycles_checked, rep.violations.len()), (1, 0));
        let g = theta();
        let rep = check_cycle_terminal(&g, &req(5, &[(0, 3), (1, 3)]), &all(&g));
        assert_eq!((rep.cycles_checked, rep.violations.len()), (3, 0));
        let g = k4();
        let r = req(4, &[(0, 3), (1, 3), (2, 3), (3, 3)]);
        let rep = check_two_terminals_per_cycle(&g, &r, &all(&g));
        assert_eq!((rep.cycles_checked, rep.violations.len()), (7, 0));
    }

    #[test]
    fn octahedron_after_minimalize() {
        let g = octahedron();
        let r = req(6, &[(0, 3), (1, 3), (5, 3)]);
        let rep = lab_on_graph(&g, &r, 100_000).unwrap();
        assert!(rep.two_terminals.cycles_checked > 0);
        assert!(rep.two_terminals.violations.is_empty());
        assert!(rep.cycle_terminal.violations.is_empty());
        assert_eq!(rep.connecting_paths.fail, 0);
    }

    #[test]
    fn witnesses_reverify() {
        let g = cycle(4);
        let r = req(4, &[(0, 1)]);
        let rep = check_two_terminals_per_cycle(&g, &r, &all(&g));
        assert_eq!(rep.violations.len(), 1);
        assert!(verify_witness(&g, &r, &rep.violations[0], 2));
        assert!(!verify_witness(&g, &r, &rep.violations[0], 1));
        let mut bad = rep.violations[0].clone();
        bad.cycle.vertices.swap(1, 2);
        assert!(!verify_witness(&g, &r, &bad, 2));
    }

    #[test]
    fn theta_arcs_qualify() {
        let g = theta();
        let r = req(5, &[(0, 2), (1, 2)]);
        match check_connecting_path_terminal(&g, &r, &all(&g), 0, 1, 1000) {
            PathCheck::Pass { paths } => assert_eq!(paths.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fixture_has_failing_and_passing_systems() {
        let text = include_str!("../fixtures/terminal_free_connection.graph");
        let (g, r) = parse_graph(text).unwrap();
        let sub = all(&g);
        assert!(Checker::new(&g, &r, Mode::Vertex).is_minimal(&vec![1; g.num_edges()]));
        let s = path_systems(&g, &r, &sub, 1, 2, 3, 1000, false);
        assert!(s.exhausted);
        let (failing, connection) = s.failing_example.clone().unwrap();
        assert_eq!(failing.len(), 3);
        assert!(connection.iter().all(|&v| r.get(v) == 0));
        assert!(s.passing >= 1);
        assert!(matches!(check_connecting_path_terminal(&g, &r, &sub, 1, 2, 1000), PathCheck::Pass { .. }));
    }

    #[test]
    fn budget_gives_unknown() {
        let text = include_str!("../fixtures/terminal_free_connection.graph");
        let (g, r) = parse_graph(text).unwrap();
        // the first enumerated system fails, so one system is not enough
        let s = path_systems(&g, &r, &all(&g), 1, 2, 3, 1, true);
        if s.passing == 0 {
            assert_eq!(check_connecting_path_terminal(&g, &r, &all(&g), 1, 2, 1), PathCheck::Unknown);
        }
    }

    /// Cycles as 2-regular connected edge subsets.
    fn brute_cycle_count(g: &EmbeddedMultigraph) -> usize {
        let m = g.num_edges();
        let mut count = 0;
        for mask in 1u32..(1 << m) {
            let es: Vec<EdgeId> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
            let mut deg = vec![0; g.num_vertices()];
            let mut uf = crate::graph::UnionFind::new(g.num_vertices());
            for &e in &es {
                let (a, b) = g.endpoints(e);
                deg[a] += 1;
                deg[b] += 1;
                uf.union(a, b);
            }
            let vs: Vec<usize> = (0..g.num_vertices()).filter(|&v| deg[v] > 0).collect();
            if vs.iter().all(|&v| deg[v] == 2) && vs.iter().all(|&v| uf.find(v) == uf.find(vs[0])) {
                count += 1;
            }
        }
        count
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn cycle_enumeration_matches_brute_force(seed in 0u64..100_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(3..8);
            let g = random_triangulation(n, 1, 2, &mut rng);
            let g = thin_connected(&g, 0.3, &mut rng);
            prop_assume!(g.num_edges() <= 16);
            let cycles = simple_cycles(&g, &vec![true; g.num_edges()]);
            prop_assert_eq!(cycles.len(), brute_cycle_count(&g));
        }

        #[test]
        fn random_minimal_instances_pass(seed in 0u64..100_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if let Some((g, r, sub)) = random_minimal_instance(rng.gen_range(5..9), 3, &[2, 3], &mut rng) {
                prop_assert!(check_cycle_terminal(&g, &r, &sub).violations.is_empty());
                let ts = r.terminals();
                let c = check_connecting_path_terminal(&g, &r, &sub, ts[0], ts[1], 100_000);
                let passed = matches!(c, PathCheck::Pass { .. });
                prop_assert!(passed);
            }
        }
    }
}
