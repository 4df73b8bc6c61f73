use ndarray::{Array1, Array2, ArrayView1};

use super::power::PowerIterationTracker;
use super::regressor::RegressorVector;

/// Recursive update of the weighted sample autocorrelation matrix:
/// Phi <- gamma Phi + mu g g^T, symmetrized to suppress floating-point drift.
pub fn tirso_update_phi(phi: &mut Array2<f64>, g: &RegressorVector, gamma: f64, mu: f64) {
    let gv = g.values();
    let dim = gv.len();
    debug_assert_eq!(phi.nrows(), dim);
    for i in 0..dim {
        for j in 0..dim {
            phi[[i, j]] = gamma * phi[[i, j]] + mu * gv[i] * gv[j];
        }
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let s = 0.5 * (phi[[i, j]] + phi[[j, i]]);
            phi[[i, j]] = s;
            phi[[j, i]] = s;
        }
    }
}

/// Recursive update of one weighted cross-correlation vector:
/// r_n <- gamma r_n + mu y_n g.
pub fn tirso_update_r(r: &mut Array1<f64>, g: &RegressorVector, y_n: f64, gamma: f64, mu: f64) {
    let gv = g.values();
    debug_assert_eq!(r.len(), gv.len());
    for i in 0..r.len() {
        r[i] = gamma * r[i] + mu * y_n * gv[i];
    }
}

/// One full statistics update: Phi plus every r_n for the received sample.
pub fn tirso_update_stats(
    phi: &mut Array2<f64>,
    r: &mut [Array1<f64>],
    g: &RegressorVector,
    sample: ArrayView1<'_, f64>,
    gamma: f64,
    mu: f64,
) {
    tirso_update_phi(phi, g, gamma, mu);
    for (n, r_n) in r.iter_mut().enumerate() {
        tirso_update_r(r_n, g, sample[n], gamma, mu);
    }
}

/// Streaming tracker of Phi[t] and its dominant eigenvalue.
///
/// Phi depends on the data only, so the same tracker serves TIRSO's gradient
/// and the adaptive step sizes of the other estimators.
#[derive(Debug, Clone)]
pub struct PhiStats {
    pub phi: Array2<f64>,
    gamma: f64,
    mu: f64,
    tracker: PowerIterationTracker,
    pub lambda_max: f64,
    pub lambda_max_running: f64,
}

impl PhiStats {
    /// Phi[P-1] = sigma2 * I.
    pub fn new(dim: usize, gamma: f64, sigma2: f64) -> Self {
        Self {
            phi: Array2::eye(dim) * sigma2,
            gamma,
            mu: 1.0 - gamma,
            tracker: PowerIterationTracker::new(),
            lambda_max: sigma2,
            lambda_max_running: sigma2,
        }
    }

    pub fn update(&mut self, g: &RegressorVector) {
        tirso_update_phi(&mut self.phi, g, self.gamma, self.mu);
        self.lambda_max = self.tracker.estimate(&self.phi).value;
        if self.lambda_max > self.lambda_max_running {
            self.lambda_max_running = self.lambda_max;
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}
