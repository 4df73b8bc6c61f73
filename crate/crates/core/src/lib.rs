//! Streaming identification and tracking of sparse VAR-causality graphs.
//!
//! The crate provides per-sample online estimators with group shrinkage
//! (`estimators`), batch and instantaneous reference solvers plus baselines
//! (`oracle`), the full metric and regret/bound-certificate stack (`metrics`),
//! synthetic ground-truth generation (`model`), and a reproducible experiment
//! harness with a CLI (`harness`).

pub mod error;
pub mod estimators;
pub mod matio;
pub mod model;
pub mod seeding;

pub use error::{Error, Result};
