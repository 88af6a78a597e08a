//! Approximation scheme, exact dynamic program and brute-force oracle for the
//! relaxed {0,1,2,3}-edge-connectivity problem on planar graphs.

pub mod error;
pub mod connectivity;
pub mod dp;
pub mod graph;
pub mod lab;
pub mod mortar;
pub mod oracle;
pub mod pipeline;
pub mod slicing;
pub mod spanner;
pub mod steiner;
pub mod suite;

pub use error::{Error, Result};
pub use connectivity::{edge_connectivity, is_feasible, minimalize, vertex_connectivity, Mode};
pub use dp::{decompose, dp_solve, BranchDecomposition, DecomposeOptions, DpOptions, DpResult};
pub use graph::io::{parse_graph, parse_solution, write_graph, write_solution};
pub use graph::{
    DartId, EdgeId, EmbeddedMultigraph, MultiSolution, RequirementMap, Subgraph, VertexId, Weight,
};
pub use oracle::{enumerate_minimal, exact_solve, OracleOptions, OracleOutcome, OracleResult};
pub use pipeline::{solve, PipelineConfig, PipelineOutput, PipelineStats, Stage, StageError};
