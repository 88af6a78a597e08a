//! Exact solver for bounded-branchwidth instances.

pub mod characteristic;
pub mod decomposition;
pub mod demands;
pub mod profile;

pub use characteristic::{leaf_characteristics, leaf_sets, Characteristic, Configuration, SeparatorCompletion};
pub use decomposition::{decompose, BranchDecomposition, DecomposeOptions};
pub use demands::{alg_demands, SmallMultigraph};
pub use profile::{dp_solve, DpOptions, DpResult};
