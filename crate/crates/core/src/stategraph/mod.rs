//! Hamiltonians as weighted state graphs, and perturbation theory written as
//! sums over walks on them.

mod graph;
mod series;

pub use graph::{
    default_labels, graph_degree_profile, to_state_graph, trajectory_contribution, DegreeProfile,
    StateGraph, MAX_TRAJECTORIES,
};
pub use series::{align_phase, perturbation_series, PerturbationSeries, MAX_ORDER, MIN_GAP};
