//! Fixture and random-instance generators. All of them produce embeddings
//! through [`EmbeddedMultigraph::from_faces`], so edge ids follow the sorted
//! endpoint order.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{EmbeddedMultigraph, VertexId, Weight};

fn unit(_: VertexId, _: VertexId) -> Weight {
    Weight::from_integer(1)
}

fn isolated(n: usize) -> EmbeddedMultigraph {
    EmbeddedMultigraph::build(n, Vec::new(), vec![Vec::new(); n]).expect("edgeless graph")
}

/// Path `0 - 1 - ... - (n-1)` with unit weights.
pub fn path(n: usize) -> EmbeddedMultigraph {
    path_with(n, unit)
}

pub fn path_with(n: usize, weight: impl FnMut(VertexId, VertexId) -> Weight) -> EmbeddedMultigraph {
    if n <= 1 {
        return isolated(n);
    }
    let mut walk: Vec<VertexId> = (0..n).collect();
    walk.extend((1..n - 1).rev());
    EmbeddedMultigraph::from_faces(n, &[walk], weight).expect("paths are planar")
}

/// Cycle `0 - 1 - ... - (n-1) - 0`, `n >= 3`.
pub fn cycle(n: usize) -> EmbeddedMultigraph {
    cycle_with(n, unit)
}

pub fn cycle_with(n: usize, weight: impl FnMut(VertexId, VertexId) -> Weight) -> EmbeddedMultigraph {
    assert!(n >= 3, "a simple cycle needs three vertices");
    let inner: Vec<VertexId> = (0..n).collect();
    let outer: Vec<VertexId> = (0..n).rev().collect();
    EmbeddedMultigraph::from_faces(n, &[inner, outer], weight).expect("cycles are planar")
}

/// Grid with `rows x cols` vertices; vertex `(r, c)` has id `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> EmbeddedMultigraph {
    grid_with(rows, cols, unit)
}

pub fn grid_with(
    rows: usize,
    cols: usize,
    weight: impl FnMut(VertexId, VertexId) -> Weight,
) -> EmbeddedMultigraph {
    assert!(rows >= 1 && cols >= 1);
    if rows == 1 || cols == 1 {
        return path_with(rows * cols, weight);
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut faces = Vec::new();
    for r in 0..rows - 1 {
        for c in 0..cols - 1 {
            faces.push(vec![id(r, c), id(r, c + 1), id(r + 1, c + 1), id(r + 1, c)]);
        }
    }
    let mut outer = Vec::new();
    outer.extend((0..rows).map(|r| id(r, 0)));
    outer.extend((1..cols).map(|c| id(rows - 1, c)));
    outer.extend((0..rows - 1).rev().map(|r| id(r, cols - 1)));
    outer.extend((1..cols - 1).rev().map(|c| id(0, c)));
    faces.push(outer);
    EmbeddedMultigraph::from_faces(rows * cols, &faces, weight).expect("grids are planar")
}

/// Wheel with rim `0..n` and hub `n`.
pub fn wheel(n: usize) -> EmbeddedMultigraph {
    wheel_with(n, unit)
}

pub fn wheel_with(n: usize, weight: impl FnMut(VertexId, VertexId) -> Weight) -> EmbeddedMultigraph {
    assert!(n >= 3);
    let mut faces: Vec<Vec<VertexId>> = (0..n).map(|i| vec![i, (i + 1) % n, n]).collect();
    faces.push((0..n).rev().collect());
    EmbeddedMultigraph::from_faces(n + 1, &faces, weight).expect("wheels are planar")
}

pub fn k4() -> EmbeddedMultigraph {
    wheel(3)
}

/// Octahedron: poles 0 and 5, equator 1..=4.
pub fn octahedron() -> EmbeddedMultigraph {
    let mut faces = Vec::new();
    for i in 0..4 {
        let a = 1 + i;
        let b = 1 + (i + 1) % 4;
        faces.push(vec![a, b, 0]);
        faces.push(vec![b, a, 5]);
    }
    EmbeddedMultigraph::from_faces(6, &faces, unit).expect("the octahedron is planar")
}

/// Triangle faces of a random triangulation on `n >= 3` vertices: repeated
/// face splits followed by random edge flips.
pub fn random_triangulation_faces<R: Rng>(n: usize, rng: &mut R) -> Vec<[VertexId; 3]> {
    assert!(n >= 3);
    let mut faces = vec![[0, 1, 2], [0, 2, 1]];
    for x in 3..n {
        let i = rng.gen_range(0..faces.len());
        let [a, b, c] = faces[i];
        faces[i] = [a, b, x];
        faces.push([b, c, x]);
        faces.push([c, a, x]);
    }
    let mut edges: HashSet<(VertexId, VertexId)> = HashSet::new();
    for f in &faces {
        for i in 0..3 {
            let (a, b) = (f[i], f[(i + 1) % 3]);
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let flips = if n > 3 { 3 * n } else { 0 };
    for _ in 0..flips {
        let i = rng.gen_range(0..faces.len());
        let s = rng.gen_range(0..3);
        let [a, b, c] = rotate(faces[i], s);
        // find the face holding the dart b -> a
        let Some((j, d)) = faces.iter().enumerate().find_map(|(j, f)| {
            (0..3).find_map(|t| {
                let g = rotate(*f, t);
                (g[0] == b && g[1] == a).then_some((j, g[2]))
            })
        }) else {
            continue;
        };
        if c == d || edges.contains(&(c.min(d), c.max(d))) {
            continue;
        }
        // keep every vertex at degree >= 3
        let degree = |v: VertexId| edges.iter().filter(|&&(x, y)| x == v || y == v).count();
        if degree(a) <= 3 || degree(b) <= 3 {
            continue;
        }
        edges.remove(&(a.min(b), a.max(b)));
        edges.insert((c.min(d), c.max(d)));
        faces[i] = [c, a, d];
        faces[j] = [d, b, c];
    }
    faces
}

fn rotate(f: [VertexId; 3], s: usize) -> [VertexId; 3] {
    [f[s % 3], f[(s + 1) % 3], f[(s + 2) % 3]]
}

/// Random triangulation with integer weights drawn uniformly from `lo..=hi`.
pub fn random_triangulation<R: Rng>(n: usize, lo: i64, hi: i64, rng: &mut R) -> EmbeddedMultigraph {
    let faces: Vec<Vec<VertexId>> = random_triangulation_faces(n, rng).iter().map(|f| f.to_vec()).collect();
    let g = EmbeddedMultigraph::from_faces(n, &faces, unit).expect("flips preserve planarity");
    randomize_weights(&g, lo, hi, rng)
}

/// Copy of `g` with integer weights drawn uniformly from `lo..=hi`.
pub fn randomize_weights<R: Rng>(g: &EmbeddedMultigraph, lo: i64, hi: i64, rng: &mut R) -> EmbeddedMultigraph {
    let w = (0..g.num_edges()).map(|_| Weight::from_integer(rng.gen_range(lo..=hi))).collect();
    g.with_weights(w)
}

/// Deletes each edge with probability `p` (in random order) as long as the
/// graph stays connected. Vertex ids are preserved; edges are renumbered.
pub fn thin_connected<R: Rng>(g: &EmbeddedMultigraph, p: f64, rng: &mut R) -> EmbeddedMultigraph {
    let mut keep = vec![true; g.num_edges()];
    let mut order: Vec<usize> = (0..g.num_edges()).collect();
    order.shuffle(rng);
    for e in order {
        if !rng.gen_bool(p) {
            continue;
        }
        keep[e] = false;
        if !connected_with(g, &keep) {
            keep[e] = true;
        }
    }
    g.edge_subgraph(&keep).graph
}

fn connected_with(g: &EmbeddedMultigraph, keep: &[bool]) -> bool {
    let n = g.num_vertices();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &d in g.rotation(v) {
            if !keep[super::edge_of(d)] {
                continue;
            }
            let w = g.head(d);
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fixture_sizes() {
        assert_eq!(grid(4, 4).num_edges(), 24);
        assert_eq!(wheel(5).num_edges(), 10);
        assert_eq!(k4().num_faces(), 4);
        assert_eq!(octahedron().num_edges(), 12);
        assert_eq!(octahedron().num_faces(), 8);
        assert_eq!(path(1).num_edges(), 0);
    }

    #[test]
    fn random_triangulations_are_triangulations() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 3..15 {
            let g = random_triangulation(n, 1, 9, &mut rng);
            assert_eq!(g.num_edges(), 3 * n - 6);
            assert!(g.faces().iter().all(|f| f.len() == 3));
        }
    }

    #[test]
    fn thinning_keeps_connectivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_triangulation(12, 1, 5, &mut rng);
        let h = thin_connected(&g, 0.5, &mut rng);
        assert!(h.num_edges() >= 11);
        assert!(h.components().iter().all(|&c| c == 0));
    }
}
