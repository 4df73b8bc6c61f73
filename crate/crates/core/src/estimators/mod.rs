//! Online engines: per-sample TISO and TIRSO updates with group shrinkage,
//! recursive statistics, step-size schedules, and graph-snapshot extraction.

mod checkpoint;
mod config;
mod graph;
mod power;
mod regressor;
mod schedule;
mod shrink;
mod stats;
mod tirso;
mod tiso;

pub use checkpoint::{Checkpoint, CheckpointMeta};
pub use config::{EstimatorConfig, NodeEstimate};
pub use graph::{graph_snapshot, group_norm_matrix, GraphEdge, GraphSnapshot, SelfLoop};
pub use power::{
    lambda_max_power_iteration, LambdaMaxEstimate, PowerIterationTracker,
    DEFAULT_POWER_MAX_ITER, DEFAULT_POWER_REL_TOL,
};
pub use regressor::{build_regressor, LagBuffer, RegressorVector};
pub use schedule::{step_size_at, StepSizeSchedule};
pub use shrink::{group_shrink, shrink_estimate};
pub use stats::{tirso_update_phi, tirso_update_r, tirso_update_stats, PhiStats};
pub use tirso::{pgd_tirso_step, prox_pass, tirso_gradient, tirso_loss, tirso_step, TirsoState};
pub use tiso::{composite_update, instantaneous_loss, tiso_gradient, tiso_step, TisoState};
