//! Exact solver for small instances, used as ground truth.

use serde::Serialize;

use crate::connectivity::{Checker, Mode};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, EmbeddedMultigraph, MultiSolution, RequirementMap, Weight};

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    /// Upper bound on `k * |E|`.
    pub slot_cap: usize,
    /// Search nodes before giving up with [`OracleOutcome::Unknown`].
    pub node_budget: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { slot_cap: 36, node_budget: 20_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub weight: Weight,
    pub solution: MultiSolution,
    pub nodes_explored: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    Optimal(OracleResult),
    Infeasible { nodes_explored: u64 },
    Unknown { nodes_explored: u64 },
}

impl OracleOutcome {
    pub fn optimal(&self) -> Option<&OracleResult> {
        match self {
            OracleOutcome::Optimal(r) => Some(r),
            _ => None,
        }
    }
}

struct Search<'a> {
    g: &'a EmbeddedMultigraph,
    checker: Checker<'a>,
    k: u8,
    w: Vec<i64>,
    need: Vec<u32>,
    /// For every depth, the cheapest remaining (undecided) edge at each vertex.
    min_rest: Vec<Vec<i64>>,
    cur: Vec<u8>,
    best: Option<(i64, Vec<u8>)>,
    best_from_search: bool,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn lower_bound(&self, depth: usize, partial: i64) -> i64 {
        let n = self.g.num_vertices();
        let mut cap = vec![0u32; n];
        for e in 0..depth {
            if self.cur[e] > 0 {
                let (a, b) = self.g.endpoints(e);
                cap[a] += self.cur[e] as u32;
                cap[b] += self.cur[e] as u32;
            }
        }
        let mut sum = 0i64;
        let mut single = 0i64;
        for v in 0..n {
            if cap[v] >= self.need[v] {
                continue;
            }
            let deficit = (self.need[v] - cap[v]) as i64;
            let mw = self.min_rest[depth][v];
            if mw == i64::MAX {
                // cannot be fixed; the optimistic check rejects this node anyway
                continue;
            }
            sum += deficit * mw;
            single = single.max(deficit * mw);
        }
        // each copy serves at most two endpoints
        partial + single.max((sum + 1) / 2)
    }

    fn better(&self, weight: i64) -> bool {
        match &self.best {
            None => true,
            Some((bw, bv)) => weight < *bw || (weight == *bw && self.cur < *bv),
        }
    }

    fn dfs(&mut self, depth: usize, partial: i64) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        let m = self.cur.len();
        if let Some((bw, _)) = &self.best {
            let lb = self.lower_bound(depth, partial);
            if lb > *bw || (lb == *bw && self.best_from_search) {
                return true;
            }
        }
        if depth == m {
            if self.better(partial) {
                self.best = Some((partial, self.cur.clone()));
                self.best_from_search = true;
            }
            return true;
        }
        let mut known_feasible = false;
        for c in 0..=self.k {
            self.cur[depth] = c;
            if !known_feasible {
                // optimistic completion: every undecided edge at k
                for x in &mut self.cur[depth + 1..] {
                    *x = self.k;
                }
                known_feasible = self.checker.feasible(&self.cur);
                if !known_feasible {
                    continue;
                }
            }
            for x in &mut self.cur[depth + 1..] {
                *x = 0;
            }
            if !self.dfs(depth + 1, partial + c as i64 * self.w[depth]) {
                return false;
            }
        }
        self.cur[depth] = 0;
        true
    }
}

/// Minimum-weight multiplicity vector in `{0..k}^E`; ties go to the
/// lexicographically smallest vector.
pub fn exact_solve(g: &EmbeddedMultigraph, r: &RequirementMap, k: u8, opts: OracleOptions) -> Result<OracleOutcome> {
    let m = g.num_edges();
    if k as usize * m > opts.slot_cap {
        return Err(Error::SizeCap(format!("{} multiplicity slots exceed the cap of {}", k as usize * m, opts.slot_cap)));
    }
    if r.max() > k {
        return Err(Error::InvalidQuery(format!("requirement {} exceeds k = {k}", r.max())));
    }
    let checker = Checker::new(g, r, Mode::Edge);
    if !checker.feasible(&vec![k; m]) {
        return Ok(OracleOutcome::Infeasible { nodes_explored: 0 });
    }
    let (w, _) = g.scaled_weights();
    let n = g.num_vertices();
    let terms = r.terminals();
    let mut need = vec![0u32; n];
    for &v in &terms {
        let other = terms.iter().filter(|&&u| u != v).map(|&u| r.get(u)).max().unwrap_or(0);
        need[v] = r.get(v).min(other) as u32;
    }
    let mut min_rest = vec![vec![i64::MAX; n]; m + 1];
    for depth in (0..m).rev() {
        let mut row = min_rest[depth + 1].clone();
        let (a, b) = g.endpoints(depth);
        row[a] = row[a].min(w[depth]);
        row[b] = row[b].min(w[depth]);
        min_rest[depth] = row;
    }
    // seed the incumbent with a greedy minimal solution
    let seed = checker.minimalize(&vec![k; m])?;
    let seed_w: i64 = seed.iter().zip(&w).map(|(&c, &x)| c as i64 * x).sum();
    let mut s = Search {
        g,
        checker,
        k,
        w,
        need,
        min_rest,
        cur: vec![0; m],
        best: Some((seed_w, seed)),
        best_from_search: false,
        nodes: 0,
        budget: opts.node_budget,
    };
    let complete = s.dfs(0, 0);
    let nodes = s.nodes;
    if !complete {
        return Ok(OracleOutcome::Unknown { nodes_explored: nodes });
    }
    let (_, mult) = s.best.expect("instance is feasible");
    let solution = MultiSolution::new(mult, k)?;
    Ok(OracleOutcome::Optimal(OracleResult { weight: solution.weight(g), solution, nodes_explored: nodes }))
}

pub const ENUMERATE_EDGE_CAP: usize = 24;

/// All inclusion-minimal feasible edge sets (each edge used at most once).
pub fn enumerate_minimal(g: &EmbeddedMultigraph, r: &RequirementMap, mode: Mode) -> Result<Vec<Vec<EdgeId>>> {
    let m = g.num_edges();
    if m > ENUMERATE_EDGE_CAP {
        return Err(Error::SizeCap(format!("{m} edges exceed the enumeration cap of {ENUMERATE_EDGE_CAP}")));
    }
    let checker = Checker::new(g, r, mode);
    let mut out = Vec::new();
    let mut cur = vec![1u8; m];
    if !checker.feasible(&cur) {
        return Ok(out);
    }
    enumerate_rec(&checker, 0, &mut cur, &mut out);
    Ok(out)
}

/// Invariant: `cur` (decided prefix + undecided edges all present) is feasible.
fn enumerate_rec(checker: &Checker, depth: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<EdgeId>>) {
    let m = cur.len();
    if depth == m {
        if checker.is_minimal(cur) {
            out.push((0..m).filter(|&e| cur[e] == 1).collect());
        }
        return;
    }
    // Once the decided prefix alone is feasible, every further edge is redundant.
    let mut prefix = cur.clone();
    for x in &mut prefix[depth..] {
        *x = 0;
    }
    if checker.feasible(&prefix) {
        if checker.is_minimal(&prefix) {
            out.push((0..m).filter(|&e| prefix[e] == 1).collect());
        }
        return;
    }
    cur[depth] = 0;
    if checker.feasible(cur) {
        enumerate_rec(checker, depth + 1, cur, out);
    }
    cur[depth] = 1;
    enumerate_rec(checker, depth + 1, cur, out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectivity::is_feasible;
    use crate::graph::generators::*;
    use crate::steiner::dijkstra;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn req(v: &[u8]) -> RequirementMap {
        RequirementMap::from_vec(v.to_vec()).unwrap()
    }

    fn solve(g: &EmbeddedMultigraph, r: &RequirementMap, k: u8) -> OracleResult {
        exact_solve(g, r, k, OracleOptions::default()).unwrap().optimal().unwrap().clone()
    }

    /// Independent check: plain enumeration of all (k+1)^m vectors.
    fn enumerate_all(g: &EmbeddedMultigraph, r: &RequirementMap, k: u8) -> Option<(Weight, Vec<u8>)> {
        let m = g.num_edges();
        let mut best: Option<(Weight, Vec<u8>)> = None;
        let total = (k as usize + 1).pow(m as u32);
        for code in 0..total {
            let mut x = code;
            let mut mult = vec![0u8; m];
            for e in (0..m).rev() {
                mult[e] = (x % (k as usize + 1)) as u8;
                x /= k as usize + 1;
            }
            let sol = MultiSolution::new(mult.clone(), k).unwrap();
            if is_feasible(g, &sol, r) {
                let w = sol.weight(g);
                if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                    best = Some((w, mult));
                }
            }
        }
        best
    }

    #[test]
    fn canonical_values() {
        let t = cycle(3);
        assert_eq!(solve(&t, &req(&[0, 0, 0]), 3).weight, Weight::from_integer(0));
        let r = req(&[3, 3, 3]);
        let res = solve(&t, &r, 3);
        assert_eq!(res.weight, Weight::from_integer(5));
        // full enumeration of the 64 vectors agrees and picks the same vector
        let (w, v) = enumerate_all(&t, &r, 3).unwrap();
        assert_eq!(w, Weight::from_integer(5));
        assert_eq!(res.solution.mult, v);
    }

    #[test]
    fn parallel_edges() {
        let w = Weight::from_integer(1);
        // three parallel edges between 0 and 1
        let g = EmbeddedMultigraph::build(2, vec![(0, 1, w), (0, 1, w), (0, 1, w)], vec![vec![0, 2, 4], vec![5, 3, 1]]).unwrap();
        assert_eq!(solve(&g, &req(&[3, 3]), 3).weight, Weight::from_integer(3));
    }

    #[test]
    fn infeasible_and_caps() {
        let p = path(3);
        let out = exact_solve(&p, &req(&[2, 0, 2]), 1, OracleOptions::default());
        assert!(out.is_err()); // requirement above k
        let out = exact_solve(&p, &req(&[1, 0, 1]), 1, OracleOptions::default()).unwrap();
        assert_eq!(out.optimal().unwrap().weight, Weight::from_integer(2));
        let g = grid(4, 4);
        assert!(exact_solve(&g, &req(&[1; 16]), 3, OracleOptions::default()).is_err());
        let w = Weight::from_integer(1);
        let g = EmbeddedMultigraph::build(3, vec![(0, 1, w)], vec![vec![0], vec![1], vec![]]).unwrap();
        let out = exact_solve(&g, &req(&[1, 0, 1]), 1, OracleOptions::default()).unwrap();
        assert!(matches!(out, OracleOutcome::Infeasible { .. }));
        let tiny = OracleOptions { node_budget: 1, ..Default::default() };
        let out = exact_solve(&cycle(4), &req(&[2, 2, 2, 2]), 2, tiny).unwrap();
        assert!(matches!(out, OracleOutcome::Unknown { .. }));
    }

    #[test]
    fn enumerate_minimal_examples() {
        let c = cycle(4);
        let sets = enumerate_minimal(&c, &req(&[1, 0, 1, 0]), Mode::Edge).unwrap();
        assert_eq!(sets.len(), 2);
        let sets = enumerate_minimal(&k4(), &req(&[3, 3, 3, 3]), Mode::Vertex).unwrap();
        assert_eq!(sets, vec![(0..6).collect::<Vec<_>>()]);
        let oct = octahedron();
        // the octahedron has no three pairwise nonadjacent vertices; use both poles and one equator vertex
        let r = req(&[3, 3, 0, 0, 0, 3]);
        let sets = enumerate_minimal(&oct, &r, Mode::Vertex).unwrap();
        assert!(!sets.is_empty());
        let chk = Checker::new(&oct, &r, Mode::Vertex);
        for s in &sets {
            let mut mult = vec![0u8; oct.num_edges()];
            for &e in s {
                mult[e] = 1;
            }
            assert!(chk.feasible(&mult) && chk.is_minimal(&mult));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]
        #[test]
        fn matches_plain_enumeration(seed in 0u64..100_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(3..=5);
            let g = random_triangulation(n, 1, 4, &mut rng);
            let g = thin_connected(&g, 0.5, &mut rng);
            let k = rng.gen_range(1..=3u8);
            let m = g.num_edges();
            prop_assume!((k as usize + 1).pow(m as u32) <= 70_000);
            let r: Vec<u8> = (0..n).map(|_| rng.gen_range(0..=k)).collect();
            let r = req(&r);
            let out = exact_solve(&g, &r, k, OracleOptions::default()).unwrap();
            match enumerate_all(&g, &r, k) {
                None => {
                    let infeasible = matches!(out, OracleOutcome::Infeasible { .. });
                    prop_assert!(infeasible);
                }
                Some((w, v)) => {
                    let res = out.optimal().unwrap();
                    prop_assert_eq!(res.weight, w);
                    prop_assert_eq!(&res.solution.mult, &v);
                }
            }
        }

        #[test]
        fn two_terminals_k1_is_shortest_path(seed in 0u64..100_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(3..=9);
            let g = random_triangulation(n, 1, 9, &mut rng);
            let g = thin_connected(&g, 0.6, &mut rng);
            prop_assume!(g.num_edges() <= 36);
            let (a, b) = (0, n - 1);
            let mut r = vec![0u8; n];
            r[a] = 1;
            r[b] = 1;
            let res = solve(&g, &req(&r), 1);
            let (w, scale) = g.scaled_weights();
            let sp = dijkstra(&g, &w, &[(a, 0)], None);
            prop_assert_eq!(res.weight, Weight::new(sp.dist[b], scale));
        }
    }
}
