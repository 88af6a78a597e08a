//! The seeded benchmark instances shared by the acceptance tests, the
//! benches and the command line.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::connectivity::instance_feasible;
use crate::graph::generators::{grid, random_triangulation, randomize_weights, thin_connected};
use crate::graph::{EmbeddedMultigraph, RequirementMap, VertexId};

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub graph: EmbeddedMultigraph,
    pub req: RequirementMap,
    pub k: u8,
}

/// Vertices the oracle is asked to handle in the suite.
pub const SMALL_VERTICES: usize = 12;

fn terminals(g: &EmbeddedMultigraph, count: usize, k: u8, rng: &mut ChaCha8Rng) -> RequirementMap {
    let n = g.num_vertices();
    let mut vs: Vec<VertexId> = (0..n).collect();
    loop {
        vs.shuffle(rng);
        let mut r = RequirementMap::zeros(n);
        for &v in vs.iter().take(count) {
            r.set(v, rng.gen_range(1..=k));
        }
        // at least one pair at the top level keeps k meaningful
        r.set(vs[0], k);
        r.set(vs[1], k);
        if instance_feasible(g, &r, k) {
            return r;
        }
    }
}

fn weighted_grid(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> EmbeddedMultigraph {
    randomize_weights(&grid(rows, cols), 1, 9, rng)
}

/// 50 instances: 20 with at most [`SMALL_VERTICES`] vertices and few edges,
/// 15 grids up to 8x8 and 15 triangulations with up to 40 vertices.
pub fn benchmark(seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for i in 0..20 {
        let k = 1 + (i % 3) as u8;
        let (name, g) = if i % 4 == 0 {
            let (a, b) = [(3, 3), (2, 4), (3, 4), (2, 5), (2, 6)][i / 4 % 5];
            (format!("small-grid-{a}x{b}-{i}"), weighted_grid(a, b, &mut rng))
        } else {
            let n = rng.gen_range(6..=SMALL_VERTICES);
            let g = random_triangulation(n, 1, 9, &mut rng);
            (format!("small-tri-{n}-{i}"), thin_connected(&g, 0.45, &mut rng))
        };
        let t = rng.gen_range(2..=4);
        let r = terminals(&g, t, k, &mut rng);
        out.push(Instance { name, graph: g, req: r, k });
    }
    for i in 0..15 {
        let side = 4 + i % 5;
        let rows = side;
        let cols = if i % 2 == 0 { side } else { (side - 1).max(4) };
        let k = 1 + (i % 3) as u8;
        let g = weighted_grid(rows, cols, &mut rng);
        let t = rng.gen_range(2..=5);
        let r = terminals(&g, t, k, &mut rng);
        out.push(Instance { name: format!("grid-{rows}x{cols}-{i}"), graph: g, req: r, k });
    }
    for i in 0..15 {
        let n = rng.gen_range(13..=40);
        let k = 1 + (i % 3) as u8;
        let g = random_triangulation(n, 1, 9, &mut rng);
        let t = rng.gen_range(2..=5);
        let r = terminals(&g, t, k, &mut rng);
        out.push(Instance { name: format!("tri-{n}-{i}"), graph: g, req: r, k });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_feasible() {
        let a = benchmark(1);
        let b = benchmark(1);
        assert_eq!(a.len(), 50);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.graph, y.graph);
            assert_eq!(x.req, y.req);
            assert!(instance_feasible(&x.graph, &x.req, x.k));
            assert!(x.req.terminals().len() >= 2);
        }
        assert!(a.iter().all(|x| x.graph.num_vertices() <= 64));
        assert_eq!(a.iter().filter(|x| x.graph.num_vertices() <= SMALL_VERTICES).count(), 20);
    }
}
