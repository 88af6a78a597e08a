//! Benchmark inputs.

use ptas3ec::graph::generators::grid;
use ptas3ec::{EmbeddedMultigraph, RequirementMap};

/// `rows x cols` unit grid with the four corners at requirement `r`.
pub fn grid_corners(rows: usize, cols: usize, r: u8) -> (EmbeddedMultigraph, RequirementMap) {
    let g = grid(rows, cols);
    let mut req = RequirementMap::zeros(rows * cols);
    for v in [0, cols - 1, (rows - 1) * cols, rows * cols - 1] {
        req.set(v, r);
    }
    (g, req)
}
