//! Mortar graph plus optimal Steiner trees over every portal subset of
//! every brick.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::graph::io::write_graph;
use crate::graph::{EdgeId, EmbeddedMultigraph, RequirementMap, VertexId, Weight};
use crate::mortar::{Brick, MortarGraph};
use crate::steiner::{tree_from_edges, SplitRule, SubsetTable, SUBSET_TABLE_LIMIT};

#[derive(Clone, Debug, Serialize)]
pub struct StoredTree {
    /// Bit `i` is portal `i` of the brick.
    pub subset: u32,
    pub edges: Vec<EdgeId>,
    pub weight: Weight,
}

#[derive(Clone, Debug, Serialize)]
pub struct BrickTrees {
    pub brick: usize,
    /// Portals the subset table ran over (may be fewer than designated).
    pub portals: Vec<VertexId>,
    pub trees: Vec<StoredTree>,
    /// Subsets whose optimal tree was heavier than the brick boundary.
    pub discarded: usize,
    /// Subsets whose optimal tree used no interior edge or repeated a stored tree.
    pub redundant: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpannerStats {
    pub weight: Weight,
    pub mortar_weight: Weight,
    pub steiner_weight: Weight,
    pub ratio: Option<f64>,
    pub bricks: usize,
    pub bricks_with_interior: usize,
    pub trees: usize,
    /// Bricks that ran with fewer portals than designated.
    pub reduced_bricks: usize,
    pub boundary_weight_sum: Weight,
    pub theta: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Spanner {
    /// Membership flag per edge of the input graph.
    pub edges: Vec<bool>,
    pub per_brick: Vec<BrickTrees>,
    pub stats: SpannerStats,
}

impl Spanner {
    pub fn edge_list(&self) -> Vec<EdgeId> {
        (0..self.edges.len()).filter(|&e| self.edges[e]).collect()
    }
}

fn brick_trees(g: &EmbeddedMultigraph, w: &[i64], brick: &Brick) -> Result<BrickTrees> {
    let mut portals = brick.portals.clone();
    let mut out = BrickTrees { brick: brick.id, portals: Vec::new(), trees: Vec::new(), discarded: 0, redundant: 0 };
    if brick.interior.is_empty() || portals.len() < 2 {
        out.portals = portals;
        return Ok(out);
    }
    let edges = brick.edges();
    let verts = {
        let mut vs: Vec<VertexId> = edges.iter().flat_map(|&e| [g.endpoints(e).0, g.endpoints(e).1]).collect();
        vs.sort_unstable();
        vs.dedup();
        vs.len()
    };
    // thin out portals (keeping every other one) until the table fits
    while portals.len() > 2 && (1usize << (portals.len() - 1)).saturating_mul(verts) > SUBSET_TABLE_LIMIT {
        portals = portals.iter().step_by(2).copied().collect();
    }
    let rule = if brick.is_simple_cycle(g) { SplitRule::CyclicIntervals } else { SplitRule::All };
    let table = SubsetTable::build(g, w, &edges, &portals, rule)?;
    let bound: i64 = brick.boundary.iter().map(|&d| w[d >> 1]).sum();
    let mut interior = vec![false; g.num_edges()];
    for &e in &brick.interior {
        interior[e] = true;
    }
    let mut seen: BTreeSet<Vec<EdgeId>> = BTreeSet::new();
    let t = portals.len();
    for set in 1u32..(1 << t) {
        if set.count_ones() < 2 {
            continue;
        }
        let cost = match table.span_cost(set) {
            Some(c) => c,
            None => continue,
        };
        if cost > bound {
            out.discarded += 1;
            continue;
        }
        let spanned: Vec<VertexId> = (0..t).filter(|i| set >> i & 1 == 1).map(|i| portals[i]).collect();
        let tree = tree_from_edges(g, w, &table.span_tree(set).unwrap(), &spanned);
        if !tree.iter().any(|&e| interior[e]) || seen.contains(&tree) {
            out.redundant += 1;
            continue;
        }
        seen.insert(tree.clone());
        let weight = g.weight_of(tree.iter().copied());
        out.trees.push(StoredTree { subset: set, edges: tree, weight });
    }
    out.portals = portals;
    Ok(out)
}

/// Mortar graph plus, per brick, every optimal portal-subset tree that
/// uses an interior edge and weighs at most the brick boundary.
pub fn build_spanner(g: &EmbeddedMultigraph, mg: &MortarGraph, bricks: &[Brick], theta: usize) -> Result<Spanner> {
    let (w, _) = g.scaled_weights();
    let per_brick: Vec<BrickTrees> = bricks.par_iter().map(|b| brick_trees(g, &w, b)).collect::<Result<_>>()?;
    let mut edges = mg.edges.clone();
    for bt in &per_brick {
        for t in &bt.trees {
            for &e in &t.edges {
                edges[e] = true;
            }
        }
    }
    let weight = g.weight_of((0..g.num_edges()).filter(|&e| edges[e]));
    let ratio = if mg.steiner_weight > Weight::from_integer(0) { (weight / mg.steiner_weight).to_f64() } else { None };
    let stats = SpannerStats {
        weight,
        mortar_weight: mg.weight,
        steiner_weight: mg.steiner_weight,
        ratio,
        bricks: bricks.len(),
        bricks_with_interior: bricks.iter().filter(|b| !b.interior.is_empty()).count(),
        trees: per_brick.iter().map(|b| b.trees.len()).sum(),
        reduced_bricks: per_brick.iter().zip(bricks).filter(|(t, b)| t.portals.len() < b.portals.len()).count(),
        boundary_weight_sum: bricks.iter().map(|b| b.boundary_weight(g)).sum(),
        theta,
    };
    Ok(Spanner { edges, per_brick, stats })
}

/// Graph file of `g` followed by one `tree brick subset: edges...` line per stored tree.
pub fn write_spanner(g: &EmbeddedMultigraph, r: &RequirementMap, sp: &Spanner) -> String {
    let mut out = write_graph(g, r);
    let list: Vec<String> = sp.edge_list().iter().map(|e| e.to_string()).collect();
    writeln!(out, "# spanner edges: {}", list.join(" ")).unwrap();
    for bt in &sp.per_brick {
        for t in &bt.trees {
            let es: Vec<String> = t.edges.iter().map(|e| e.to_string()).collect();
            writeln!(out, "tree {} {:#x}: {}", bt.brick, t.subset, es.join(" ")).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;
    use crate::mortar::{build_mortar, designate_portals, extract_bricks, MortarOptions};
    use crate::oracle::{exact_solve, OracleOptions};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rim_spanner(spoke: i64, theta: usize) -> Spanner {
        let g = wheel_with(6, |u, v| Weight::from_integer(if u.max(v) == 6 { spoke } else { 1 }));
        let rim: Vec<bool> = (0..g.num_edges()).map(|e| g.endpoints(e).0.max(g.endpoints(e).1) < 6).collect();
        let mut bricks = extract_bricks(&g, &rim);
        for b in &mut bricks {
            designate_portals(&g, b, theta);
        }
        let mg = MortarGraph {
            weight: g.weight_of((0..g.num_edges()).filter(|&e| rim[e])),
            edges: rim,
            steiner_weight: Weight::from_integer(5),
            ratio: None,
            bound: Weight::from_integer(18),
            closing_chords: 0,
            shortcut_chords: 0,
            column_weight: Weight::from_integer(0),
        };
        build_spanner(&g, &mg, &bricks, theta).unwrap()
    }

    #[test]
    fn wheel_hub_tree_kept_only_when_light() {
        let sp = rim_spanner(1, 3);
        let inner = sp.per_brick.iter().find(|b| !b.trees.is_empty()).unwrap();
        assert_eq!(inner.portals.len(), 3);
        let all = inner.trees.iter().find(|t| t.subset == 0b111).unwrap();
        assert_eq!(all.weight, Weight::from_integer(3));
        let sp = rim_spanner(2, 3);
        assert!(sp.per_brick.iter().all(|b| b.trees.is_empty()));
        assert_eq!(sp.edge_list().len(), 6);
    }

    #[test]
    fn one_portal_gives_mortar_only() {
        let sp = rim_spanner(1, 1);
        assert_eq!(sp.stats.trees, 0);
        assert_eq!(sp.edge_list().len(), 6);
    }

    fn pipeline_spanner(g: &EmbeddedMultigraph, r: &RequirementMap, eps: Weight, theta: usize) -> Spanner {
        let mg = build_mortar(g, r, MortarOptions::new(eps)).unwrap();
        let mut bricks = extract_bricks(g, &mg.edges);
        for b in &mut bricks {
            designate_portals(g, b, theta);
        }
        let sp = build_spanner(g, &mg, &bricks, theta).unwrap();
        let (w, _) = g.scaled_weights();
        for (bt, b) in sp.per_brick.iter().zip(&bricks) {
            let bound: i64 = b.boundary.iter().map(|&d| w[d >> 1]).sum();
            let brick_edges = b.edges();
            for t in &bt.trees {
                assert!(t.weight <= Weight::from_integer(bound));
                assert!(t.edges.iter().all(|e| brick_edges.contains(e)));
            }
        }
        assert!((0..g.num_edges()).all(|e| !mg.edges[e] || sp.edges[e]));
        sp
    }

    #[test]
    fn grid_spanner_contains_mortar() {
        let g = grid(5, 5);
        let mut r = RequirementMap::zeros(25);
        for v in [0, 4, 20, 24] {
            r.set(v, 2);
        }
        let sp = pipeline_spanner(&g, &r, Weight::new(1, 2), 8);
        assert!(sp.stats.weight >= sp.stats.mortar_weight);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn spanner_optimum_is_no_better(seed in 0u64..100_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(4..9);
            let g = random_triangulation(n, 1, 9, &mut rng);
            let g = thin_connected(&g, 0.4, &mut rng);
            let k = rng.gen_range(1..=2u8);
            let mut r = RequirementMap::zeros(n);
            for v in 0..n {
                if rng.gen_bool(0.4) {
                    r.set(v, rng.gen_range(1..=k));
                }
            }
            if r.terminals().len() < 2 {
                return Ok(());
            }
            let sp = pipeline_spanner(&g, &r, Weight::new(1, 2), 8);
            let sub = g.edge_subgraph(&sp.edges);
            let opts = OracleOptions { slot_cap: 40, ..Default::default() };
            let full = exact_solve(&g, &r, k, opts).unwrap();
            let restricted = exact_solve(&sub.graph, &r, k, opts).unwrap();
            if let (Some(a), Some(b)) = (full.optimal(), restricted.optimal()) {
                prop_assert!(a.weight <= b.weight);
            }
        }
    }
}
