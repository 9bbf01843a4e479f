//! Weighted graphs, Laplacians, the labelings of bounded cut size and their
//! convex relaxation, and bounds on the relaxation's Rademacher average.

mod exact;
mod graph;
mod laplacian;
mod relaxed;

pub use exact::{
    exact_distance_bruteforce, min_cut_value, ExactConstraintSet, MAX_BRUTEFORCE_VERTICES,
};
pub use graph::WeightedGraph;
pub use laplacian::{build_laplacian, cut_value, DegreeConvention, Laplacian, MAX_DENSE_DIMENSION};
pub use relaxed::{
    relaxed_distance, relaxed_graph_phi, relaxed_rademacher, spectral_rad_bound, RelaxedSet,
    RelaxedSolution, SolverOptions,
};
