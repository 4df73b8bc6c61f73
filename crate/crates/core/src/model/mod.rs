//! Ground-truth generation: random causality graphs, stable VAR coefficient
//! tensors, and synthetic time series (stationary and smooth-transition).

mod graph;
mod io;
mod params;
mod simulate;

pub use graph::{generate_er_graph, AdjacencyMask};
pub use io::{read_series_csv, write_series_csv, GroundTruthSidecar};
pub use params::{companion_spectral_radius, sample_var_coefficients, stabilize, VarParameters};
pub use simulate::{
    simulate_smooth_transition, simulate_var, simulate_var_from, transition_coefficients,
    transition_profile, CoefficientTruth, SmoothTransitionConfig, TimeSeriesMatrix,
};
