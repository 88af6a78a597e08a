//! The full approximation pipeline: mortar graph, spanner, slices, exact
//! DP per slice, recombination.

use std::fmt;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::connectivity::{instance_feasible, Checker, Mode};
use crate::dp::{decompose, dp_solve, DecomposeOptions, DpOptions};
use crate::error::{Error, Result};
use crate::graph::{EmbeddedMultigraph, MultiSolution, RequirementMap, Weight};
use crate::mortar::{build_mortar, default_theta, designate_portals, extract_bricks, MortarOptions};
use crate::oracle::{exact_solve, OracleOptions};
use crate::slicing::{assign_artificial_terminals, recombine, single_slice, slice, slice_requirements, Slicing};
use crate::spanner::build_spanner;

#[derive(Clone, Copy, Debug)]
pub struct PipelineConfig {
    pub epsilon: Weight,
    pub k: u8,
    /// Portals per brick; `None` means [`default_theta`].
    pub theta: Option<usize>,
    /// Dual BFS levels per slice; `None` means [`default_eta`].
    pub eta: Option<usize>,
    pub width_cap: usize,
    pub seed: u64,
    pub dp: DpOptions,
    /// Run the oracle for a reference weight when the instance is small enough.
    pub oracle: Option<OracleOptions>,
}

impl PipelineConfig {
    pub fn new(epsilon: Weight, k: u8) -> Self {
        PipelineConfig {
            epsilon,
            k,
            theta: None,
            eta: None,
            width_cap: 6,
            seed: 0,
            dp: DpOptions::default(),
            oracle: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilon <= Weight::from_integer(0) || self.epsilon >= Weight::from_integer(1) {
            return Err(Error::InvalidQuery(format!("epsilon {} is not in (0, 1)", self.epsilon)));
        }
        if !(1..=3).contains(&self.k) {
            return Err(Error::InvalidQuery(format!("k = {} is not in 1..=3", self.k)));
        }
        if self.theta == Some(0) {
            return Err(Error::InvalidQuery("theta must be positive".into()));
        }
        if matches!(self.eta, Some(e) if e < 2) {
            return Err(Error::InvalidQuery("eta must be at least 2".into()));
        }
        if self.width_cap == 0 {
            return Err(Error::InvalidQuery("width cap must be positive".into()));
        }
        Ok(())
    }

    pub fn theta(&self) -> usize {
        self.theta.unwrap_or_else(|| default_theta(self.epsilon))
    }

    pub fn eta(&self) -> usize {
        self.eta.unwrap_or_else(|| default_eta(self.epsilon))
    }
}

/// `max(2, ceil(1/ε))`.
pub fn default_eta(epsilon: Weight) -> usize {
    (Weight::from_integer(1) / epsilon).ceil().to_integer().max(2) as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Input,
    Mortar,
    Spanner,
    Slicing,
    SliceSolve,
    Recombine,
    Verify,
}

#[derive(Debug)]
pub struct StageError {
    pub stage: Stage,
    pub error: Error,
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}] {}", self.stage, self.error)
    }
}

impl std::error::Error for StageError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

fn at(stage: Stage) -> impl FnOnce(Error) -> StageError {
    move |error| StageError { stage, error }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SliceMethod {
    Dp,
    /// Every slice edge at the slice's largest requirement, then minimalized.
    Fallback,
}

#[derive(Clone, Debug, Serialize)]
pub struct SliceStats {
    pub id: usize,
    pub edges: usize,
    pub terminals: usize,
    pub artificial_terminals: usize,
    pub width: Option<usize>,
    pub method: SliceMethod,
    pub fallback_reason: Option<String>,
    pub weight: Weight,
    pub dp_entries: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineStats {
    pub vertices: usize,
    pub edges: usize,
    pub terminals: usize,
    pub k: u8,
    pub epsilon: Weight,
    pub theta: usize,
    pub eta: usize,
    pub steiner_weight: Weight,
    pub mortar_weight: Weight,
    pub mortar_ratio: Option<f64>,
    pub spanner_edges: usize,
    pub spanner_weight: Weight,
    pub spanner_ratio: Option<f64>,
    pub slices: usize,
    pub shift: usize,
    pub boundary_weight: Weight,
    /// Set when slicing failed and the spanner was solved as one slice.
    pub slicing_error: Option<String>,
    pub per_slice: Vec<SliceStats>,
    pub recombined_with_sum: bool,
    /// Set when recombination failed and the spanner fallback was used.
    pub recombine_error: Option<String>,
    pub weight_before_minimalize: Weight,
    pub weight: Weight,
    pub oracle_weight: Option<Weight>,
    pub oracle_ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineOutput {
    pub solution: MultiSolution,
    pub weight: Weight,
    /// `None` when the instance has fewer than two terminals.
    pub stats: Option<PipelineStats>,
}

fn ratio(a: Weight, b: Weight) -> Option<f64> {
    if b > Weight::from_integer(0) {
        (a / b).to_f64()
    } else {
        None
    }
}

struct SliceOutcome {
    mult: Vec<u8>,
    stats: SliceStats,
}

fn solve_slice(h: &EmbeddedMultigraph, sl: &Slicing, id: usize, r: &RequirementMap, cfg: &PipelineConfig) -> Result<SliceOutcome> {
    let s = &sl.slices[id];
    let mut keep = vec![false; h.num_edges()];
    for &e in &s.edges {
        keep[e] = true;
    }
    let sub = h.edge_subgraph(&keep);
    let sr = slice_requirements(h, s, r);
    let mut stats = SliceStats {
        id,
        edges: s.edges.len(),
        terminals: sr.terminals().len(),
        artificial_terminals: s.artificial.len(),
        width: None,
        method: SliceMethod::Dp,
        fallback_reason: None,
        weight: Weight::from_integer(0),
        dp_entries: 0,
    };
    let dp = decompose(&sub.graph, DecomposeOptions { width_cap: cfg.width_cap, seed: cfg.seed, ..Default::default() })
        .and_then(|bd| {
            stats.width = Some(bd.width);
            dp_solve(&sub.graph, &sr, cfg.k, &bd, cfg.dp)
        });
    let local = match dp {
        Ok(res) => {
            stats.dp_entries = res.stats.total_entries;
            res.solution.mult
        }
        Err(e @ (Error::WidthCap { .. } | Error::Budget(_))) => {
            stats.method = SliceMethod::Fallback;
            stats.fallback_reason = Some(e.to_string());
            let top = sr.max();
            let full: Vec<u8> = vec![top; sub.graph.num_edges()];
            Checker::new(&sub.graph, &sr, Mode::Edge).minimalize(&full)?
        }
        Err(e) => return Err(e),
    };
    let mut mult = vec![0u8; h.num_edges()];
    for (i, &c) in local.iter().enumerate() {
        mult[sub.edge_map[i]] = c;
    }
    stats.weight = h.weight_of((0..h.num_edges()).flat_map(|e| std::iter::repeat(e).take(mult[e] as usize)));
    Ok(SliceOutcome { mult, stats })
}

/// Runs every step on `(g, r)`; the result is always feasible.
pub fn solve(g: &EmbeddedMultigraph, r: &RequirementMap, cfg: &PipelineConfig) -> std::result::Result<PipelineOutput, StageError> {
    cfg.validate().map_err(at(Stage::Input))?;
    if r.len() != g.num_vertices() {
        return Err(StageError {
            stage: Stage::Input,
            error: Error::InvalidQuery(format!("{} requirements for {} vertices", r.len(), g.num_vertices())),
        });
    }
    let k = cfg.k;
    let m = g.num_edges();
    if r.terminals().len() < 2 {
        return Ok(PipelineOutput { solution: MultiSolution::empty(m, k), weight: Weight::from_integer(0), stats: None });
    }
    if r.max() > k || !instance_feasible(g, r, k) {
        return Err(StageError { stage: Stage::Input, error: Error::Infeasible(format!("no solution with multiplicities up to {k}")) });
    }
    let (theta, eta) = (cfg.theta(), cfg.eta());

    let mg = build_mortar(g, r, MortarOptions::new(cfg.epsilon)).map_err(at(Stage::Mortar))?;
    let mut bricks = extract_bricks(g, &mg.edges);
    for b in &mut bricks {
        designate_portals(g, b, theta);
    }
    let sp = build_spanner(g, &mg, &bricks, theta).map_err(at(Stage::Spanner))?;
    let hsub = g.edge_subgraph(&sp.edges);
    let h = &hsub.graph;

    let (mut sl, slicing_error) = match slice(h, eta) {
        Ok(s) => (s, None),
        Err(e) => (single_slice(h), Some(e.to_string())),
    };
    assign_artificial_terminals(h, &mut sl, r).map_err(at(Stage::Slicing))?;

    let outcomes: Vec<SliceOutcome> = (0..sl.slices.len())
        .into_par_iter()
        .map(|id| solve_slice(h, &sl, id, r, cfg))
        .collect::<Result<_>>()
        .map_err(at(Stage::SliceSolve))?;
    let per: Vec<Vec<u8>> = outcomes.iter().map(|o| o.mult.clone()).collect();
    let checker_h = Checker::new(h, r, Mode::Edge);
    let (hmult, used_sum, recombine_error) = match recombine(h, &sl, &per, r, k) {
        Ok(rc) => (rc.solution.mult, rc.used_sum, None),
        Err(e) => {
            let full = vec![r.max(); h.num_edges()];
            let mult = checker_h.minimalize(&full).map_err(at(Stage::Recombine))?;
            (mult, false, Some(e.to_string()))
        }
    };
    let mut mult = vec![0u8; m];
    for (i, &c) in hmult.iter().enumerate() {
        mult[hsub.edge_map[i]] = c;
    }
    let before = MultiSolution::new(mult.clone(), k).map_err(at(Stage::Recombine))?.weight(g);
    let checker = Checker::new(g, r, Mode::Edge);
    let mult = checker.minimalize(&mult).map_err(at(Stage::Verify))?;
    if let Some(v) = checker.first_violation(&mult) {
        return Err(StageError { stage: Stage::Verify, error: Error::Recombine { u: v.u, v: v.v, need: v.need, have: v.have } });
    }
    let solution = MultiSolution::new(mult, k).map_err(at(Stage::Verify))?;
    let weight = solution.weight(g);

    let oracle_weight = cfg.oracle.and_then(|o| {
        if m * k as usize > o.slot_cap {
            return None;
        }
        exact_solve(g, r, k, o).ok().and_then(|out| out.optimal().map(|x| x.weight))
    });
    let stats = PipelineStats {
        vertices: g.num_vertices(),
        edges: m,
        terminals: r.terminals().len(),
        k,
        epsilon: cfg.epsilon,
        theta,
        eta,
        steiner_weight: mg.steiner_weight,
        mortar_weight: mg.weight,
        mortar_ratio: ratio(mg.weight, mg.steiner_weight),
        spanner_edges: sp.edge_list().len(),
        spanner_weight: sp.stats.weight,
        spanner_ratio: ratio(sp.stats.weight, mg.steiner_weight),
        slices: sl.slices.len(),
        shift: sl.shift,
        boundary_weight: sl.boundary_weight(),
        slicing_error,
        per_slice: outcomes.into_iter().map(|o| o.stats).collect(),
        recombined_with_sum: used_sum,
        recombine_error,
        weight_before_minimalize: before,
        weight,
        oracle_weight,
        oracle_ratio: oracle_weight.and_then(|o| ratio(weight, o)),
    };
    Ok(PipelineOutput { solution, weight, stats: Some(stats) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectivity::is_feasible;
    use crate::graph::generators::*;

    fn req(n: usize, terms: &[(usize, u8)]) -> RequirementMap {
        let mut r = RequirementMap::zeros(n);
        for &(v, x) in terms {
            r.set(v, x);
        }
        r
    }

    #[test]
    fn trivial_instance() {
        let g = grid(3, 3);
        let out = solve(&g, &RequirementMap::zeros(9), &PipelineConfig::new(Weight::new(1, 2), 3)).unwrap();
        assert_eq!(out.weight, Weight::from_integer(0));
        assert!(out.solution.mult.iter().all(|&c| c == 0));
    }

    #[test]
    fn path_gives_shortest_path() {
        let g = path(5);
        let r = req(5, &[(0, 1), (4, 1)]);
        let mut cfg = PipelineConfig::new(Weight::new(1, 2), 1);
        cfg.oracle = Some(OracleOptions::default());
        let out = solve(&g, &r, &cfg).unwrap();
        assert_eq!(out.weight, Weight::from_integer(4));
        assert_eq!(out.stats.unwrap().oracle_ratio, Some(1.0));
    }

    #[test]
    fn triangle_value() {
        let g = cycle(3);
        let r = req(3, &[(0, 3), (1, 3), (2, 3)]);
        let out = solve(&g, &r, &PipelineConfig::new(Weight::new(1, 2), 3)).unwrap();
        assert_eq!(out.weight, Weight::from_integer(5));
    }

    #[test]
    fn grid_corners_three_connected() {
        let g = grid(6, 6);
        let r = req(36, &[(0, 3), (5, 3), (30, 3), (35, 3)]);
        let out = solve(&g, &r, &PipelineConfig::new(Weight::new(1, 2), 3)).unwrap();
        assert!(is_feasible(&g, &out.solution, &r));
        assert!(out.stats.unwrap().slices >= 1);
    }

    #[test]
    fn bad_config_and_infeasible_input() {
        let g = path(3);
        let r = req(3, &[(0, 1), (2, 1)]);
        let e = solve(&g, &r, &PipelineConfig::new(Weight::from_integer(1), 1)).unwrap_err();
        assert_eq!(e.stage, Stage::Input);
        let r = req(3, &[(0, 2), (2, 2)]);
        let e = solve(&g, &r, &PipelineConfig::new(Weight::new(1, 2), 1)).unwrap_err();
        assert!(matches!(e.error, Error::Infeasible(_)));
    }
}
