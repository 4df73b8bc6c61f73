use ndarray::{Array1, Array2, ArrayView1};

use super::config::{EstimatorConfig, NodeEstimate};
use super::regressor::{LagBuffer, RegressorVector};
use super::schedule::step_size_at;
use super::shrink::shrink_estimate;
use super::stats::PhiStats;
use crate::error::{Error, Result};

/// Instantaneous-loss gradient v_n = g (g^T a - y_n).
pub fn tiso_gradient(a: &NodeEstimate, g: &RegressorVector, y_n: f64) -> Array1<f64> {
    let residual = g.values().dot(a.values()) - y_n;
    g.values() * residual
}

/// Squared prediction loss of one node, l_t(a) = (y_n - g^T a)^2 / 2.
pub fn instantaneous_loss(a: &NodeEstimate, g: &RegressorVector, y_n: f64) -> f64 {
    let e = y_n - g.values().dot(a.values());
    0.5 * e * e
}

/// Gradient step followed by group shrinkage with amounts alpha*lambda_{n,n'}.
pub fn composite_update(
    estimate: &NodeEstimate,
    gradient: &Array1<f64>,
    alpha: f64,
    cfg: &EstimatorConfig,
) -> NodeEstimate {
    let n = estimate.node();
    let a_f = estimate.values() - &(gradient * alpha);
    let amounts: Vec<f64> = (0..cfg.n_nodes)
        .map(|n_prime| alpha * cfg.lambda_for(n, n_prime))
        .collect();
    shrink_estimate(a_f, &amounts, n, cfg.order)
}

/// State of the instantaneous-loss online estimator.
#[derive(Debug, Clone)]
pub struct TisoState {
    pub estimates: Vec<NodeEstimate>,
    buffer: LagBuffer,
    /// Index of the next sample to receive (number of samples seen so far).
    t: usize,
    /// Data statistics, kept only when the schedule needs lambda_max(Phi).
    pub stats: Option<PhiStats>,
    /// h_t(a_n[t]) for each node at the most recent update.
    pub last_losses: Vec<f64>,
    pub last_alpha: f64,
}

impl TisoState {
    pub fn new(cfg: &EstimatorConfig) -> Result<Self> {
        cfg.validate()?;
        cfg.schedule.validate()?;
        let stats = cfg
            .schedule
            .needs_phi()
            .then(|| PhiStats::new(cfg.n_nodes * cfg.order, cfg.forgetting, cfg.init_phi_scale));
        Ok(Self {
            estimates: (0..cfg.n_nodes)
                .map(|n| NodeEstimate::zeros(n, cfg.n_nodes, cfg.order))
                .collect(),
            buffer: LagBuffer::new(cfg.n_nodes, cfg.order),
            t: 0,
            stats,
            last_losses: vec![0.0; cfg.n_nodes],
            last_alpha: 0.0,
        })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// True once the lag buffer is full and updates are being applied.
    pub fn warmed_up(&self) -> bool {
        self.buffer.is_full()
    }

    /// Feed one sample. The first P samples only fill the lag buffer;
    /// afterwards every call performs a full update.
    pub fn ingest(&mut self, sample: ArrayView1<'_, f64>, cfg: &EstimatorConfig) -> Result<()> {
        if self.buffer.is_full() {
            tiso_step(self, sample, cfg)
        } else {
            self.buffer.push(sample)?;
            self.t += 1;
            Ok(())
        }
    }

    /// Estimates stacked as an N x NP matrix (row n = a_n).
    pub fn estimate_matrix(&self) -> Array2<f64> {
        stack_estimates(&self.estimates)
    }
}

pub(crate) fn stack_estimates(estimates: &[NodeEstimate]) -> Array2<f64> {
    let n = estimates.len();
    let w = estimates[0].values().len();
    let mut out = Array2::zeros((n, w));
    for (i, e) in estimates.iter().enumerate() {
        out.row_mut(i).assign(e.values());
    }
    out
}

/// One TISO update after receiving y[t]: per node, gradient step on the
/// instantaneous loss followed by group shrinkage, then buffer rotation.
pub fn tiso_step(
    state: &mut TisoState,
    sample: ArrayView1<'_, f64>,
    cfg: &EstimatorConfig,
) -> Result<()> {
    if !state.buffer.is_full() {
        return Err(Error::InvalidParameter(
            "tiso_step requires a full lag buffer (t >= P)".into(),
        ));
    }
    let g = state.buffer.regressor()?;
    if let Some(stats) = state.stats.as_mut() {
        stats.update(&g);
    }
    let lambda_max = state.stats.as_ref().map(|s| {
        if matches!(cfg.schedule, super::schedule::StepSizeSchedule::AdaptiveMax { .. }) {
            s.lambda_max_running
        } else {
            s.lambda_max
        }
    });
    let alpha = step_size_at(&cfg.schedule, state.t, lambda_max)?;
    state.last_alpha = alpha;

    for (n, estimate) in state.estimates.iter_mut().enumerate() {
        let y_n = sample[n];
        state.last_losses[n] =
            instantaneous_loss(estimate, &g, y_n) + cfg.regularizer_value(estimate);
        let v = tiso_gradient(estimate, &g, y_n);
        *estimate = composite_update(estimate, &v, alpha, cfg);
    }
    state.buffer.push(sample)?;
    state.t += 1;
    Ok(())
}
