use ndarray::{Array1, Array2, ArrayView1};

use super::config::{EstimatorConfig, NodeEstimate};
use super::regressor::LagBuffer;
use super::schedule::{step_size_at, StepSizeSchedule};
use super::stats::{tirso_update_r, PhiStats};
use super::tiso::{composite_update, stack_estimates};
use crate::error::{Error, Result};

/// Gradient of the running-average loss: Phi a - r_n.
pub fn tirso_gradient(phi: &Array2<f64>, r_n: &Array1<f64>, a: &NodeEstimate) -> Array1<f64> {
    phi.dot(a.values()) - r_n
}

/// Running-average loss value, l~_t(a) = a^T Phi a / 2 - r^T a + const_n,
/// where const_n = mu/2 sum gamma^(t-tau) y_n^2[tau] is tracked recursively.
pub fn tirso_loss(phi: &Array2<f64>, r_n: &Array1<f64>, const_n: f64, a: &NodeEstimate) -> f64 {
    let av = a.values();
    0.5 * av.dot(&phi.dot(av)) - r_n.dot(av) + const_n
}

/// State of the recursive online estimator: Phi, {r_n}, current estimates,
/// the lag buffer, and the per-node loss constants.
#[derive(Debug, Clone)]
pub struct TirsoState {
    pub stats: PhiStats,
    pub r: Vec<Array1<f64>>,
    pub estimates: Vec<NodeEstimate>,
    /// mu/2-weighted running sums of y_n^2, the data-only loss terms.
    pub loss_consts: Vec<f64>,
    buffer: LagBuffer,
    t: usize,
    pub last_losses: Vec<f64>,
    pub last_alpha: f64,
}

impl TirsoState {
    pub fn new(cfg: &EstimatorConfig) -> Result<Self> {
        cfg.validate()?;
        cfg.schedule.validate()?;
        let dim = cfg.n_nodes * cfg.order;
        Ok(Self {
            stats: PhiStats::new(dim, cfg.forgetting, cfg.init_phi_scale),
            r: vec![Array1::zeros(dim); cfg.n_nodes],
            estimates: (0..cfg.n_nodes)
                .map(|n| NodeEstimate::zeros(n, cfg.n_nodes, cfg.order))
                .collect(),
            loss_consts: vec![0.0; cfg.n_nodes],
            buffer: LagBuffer::new(cfg.n_nodes, cfg.order),
            t: 0,
            last_losses: vec![0.0; cfg.n_nodes],
            last_alpha: 0.0,
        })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn warmed_up(&self) -> bool {
        self.buffer.is_full()
    }

    pub fn phi(&self) -> &Array2<f64> {
        &self.stats.phi
    }

    pub fn ingest(&mut self, sample: ArrayView1<'_, f64>, cfg: &EstimatorConfig) -> Result<()> {
        if self.buffer.is_full() {
            tirso_step(self, sample, cfg)
        } else {
            self.buffer.push(sample)?;
            self.t += 1;
            Ok(())
        }
    }

    pub fn estimate_matrix(&self) -> Array2<f64> {
        stack_estimates(&self.estimates)
    }

    fn resolve_alpha(&self, cfg: &EstimatorConfig) -> Result<f64> {
        let lambda_max = match cfg.schedule {
            StepSizeSchedule::AdaptiveMax { .. } => Some(self.stats.lambda_max_running),
            _ => Some(self.stats.lambda_max),
        };
        step_size_at(&cfg.schedule, self.t, lambda_max)
    }

    /// Shared pre-update phase: rotate statistics for the new sample, record
    /// the iterate losses, and resolve the step size.
    fn absorb_sample(
        &mut self,
        sample: ArrayView1<'_, f64>,
        cfg: &EstimatorConfig,
    ) -> Result<f64> {
        if !self.buffer.is_full() {
            return Err(Error::InvalidParameter(
                "update requires a full lag buffer (t >= P)".into(),
            ));
        }
        let g = self.buffer.regressor()?;
        self.stats.update(&g);
        let gamma = cfg.forgetting;
        let mu = cfg.mu();
        for n in 0..cfg.n_nodes {
            tirso_update_r(&mut self.r[n], &g, sample[n], gamma, mu);
            self.loss_consts[n] = gamma * self.loss_consts[n] + 0.5 * mu * sample[n] * sample[n];
        }
        for n in 0..cfg.n_nodes {
            self.last_losses[n] = tirso_loss(
                &self.stats.phi,
                &self.r[n],
                self.loss_consts[n],
                &self.estimates[n],
            ) + cfg.regularizer_value(&self.estimates[n]);
        }
        let alpha = self.resolve_alpha(cfg)?;
        self.last_alpha = alpha;
        self.buffer.push(sample)?;
        self.t += 1;
        Ok(alpha)
    }
}

/// One composite (prox-gradient) pass over every node at fixed statistics.
pub fn prox_pass(
    estimates: &mut [NodeEstimate],
    phi: &Array2<f64>,
    r: &[Array1<f64>],
    alpha: f64,
    cfg: &EstimatorConfig,
) {
    for (n, estimate) in estimates.iter_mut().enumerate() {
        let v = tirso_gradient(phi, &r[n], estimate);
        *estimate = composite_update(estimate, &v, alpha, cfg);
    }
}

/// One TIRSO update: statistics first, then per node a gradient step on the
/// running-average loss followed by group shrinkage.
pub fn tirso_step(
    state: &mut TirsoState,
    sample: ArrayView1<'_, f64>,
    cfg: &EstimatorConfig,
) -> Result<()> {
    let alpha = state.absorb_sample(sample, cfg)?;
    let TirsoState {
        stats,
        r,
        estimates,
        ..
    } = state;
    prox_pass(estimates, &stats.phi, r, alpha, cfg);
    Ok(())
}

/// Baseline that replaces the single composite step with `inner_iters`
/// prox-gradient iterations on the frozen instantaneous objective. With
/// `inner_iters == 1` it coincides with `tirso_step` bit for bit.
pub fn pgd_tirso_step(
    state: &mut TirsoState,
    sample: ArrayView1<'_, f64>,
    cfg: &EstimatorConfig,
    inner_iters: usize,
) -> Result<()> {
    if inner_iters == 0 {
        return Err(Error::InvalidParameter("inner_iters must be >= 1".into()));
    }
    let alpha = state.absorb_sample(sample, cfg)?;
    let TirsoState {
        stats,
        r,
        estimates,
        ..
    } = state;
    for _ in 0..inner_iters {
        prox_pass(estimates, &stats.phi, r, alpha, cfg);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::regressor::RegressorVector;
    use nalgebra::{DMatrix, DVector};
    use ndarray::arr1;

    fn lcg(seed: u64) -> impl FnMut() -> f64 {
        let mut x = seed;
        move || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 11) as f64) / (1u64 << 53) as f64 - 0.5
        }
    }

    #[test]
    fn gradient_special_cases() {
        let phi = Array2::eye(2);
        let r = arr1(&[0.3, -0.4]);
        let zero = NodeEstimate::zeros(0, 2, 1);
        assert_eq!(tirso_gradient(&phi, &r, &zero), arr1(&[-0.3, 0.4]));
        let a = NodeEstimate::from_values(0, 1, arr1(&[1.5, -2.0])).unwrap();
        let zero_r = Array1::zeros(2);
        assert_eq!(tirso_gradient(&phi, &zero_r, &a), arr1(&[1.5, -2.0]));
    }

    // Finite differences of the brute-force weighted-sum loss.
    #[test]
    fn gradient_matches_finite_difference_of_weighted_loss() {
        let mut next = lcg(4242);
        let gamma = 0.95f64;
        let mu = 1.0 - gamma;
        let dim = 4;
        let steps = 12;
        let gs: Vec<Array1<f64>> = (0..steps)
            .map(|_| Array1::from_shape_fn(dim, |_| next()))
            .collect();
        let ys: Vec<f64> = (0..steps).map(|_| next()).collect();

        // direct weighted-sum loss at a (no sigma^2 prior here)
        let loss = |a: &Array1<f64>| -> f64 {
            let t = steps - 1;
            let mut acc = 0.0;
            for tau in 0..steps {
                let w = mu * gamma.powi((t - tau) as i32);
                let e = ys[tau] - gs[tau].dot(a);
                acc += 0.5 * w * e * e;
            }
            acc
        };

        let mut phi = Array2::zeros((dim, dim));
        let mut r = vec![Array1::zeros(dim)];
        for (g_raw, y) in gs.iter().zip(ys.iter()) {
            let g = RegressorVector::new(g_raw.clone(), 2).unwrap();
            super::super::stats::tirso_update_stats(
                &mut phi,
                &mut r,
                &g,
                arr1(&[*y]).view(),
                gamma,
                mu,
            );
        }

        let a_vals = Array1::from_shape_fn(dim, |_| next());
        let a = NodeEstimate::from_values(0, 2, a_vals.clone()).unwrap();
        let grad = tirso_gradient(&phi, &r[0], &a);
        let h = 1e-6;
        for i in 0..dim {
            let mut plus = a_vals.clone();
            plus[i] += h;
            let mut minus = a_vals.clone();
            minus[i] -= h;
            let fd = (loss(&plus) - loss(&minus)) / (2.0 * h);
            let denom = grad[i].abs().max(1e-3);
            assert!(
                ((grad[i] - fd) / denom).abs() < 1e-6,
                "component {i}: analytic {} vs fd {fd}",
                grad[i]
            );
        }
    }

    #[test]
    fn zero_stream_with_prior_keeps_estimates_zero() {
        let cfg = EstimatorConfig::new(2, 2, 0.1, StepSizeSchedule::Constant { alpha: 0.3 })
            .with_init_phi_scale(0.5);
        let mut state = TirsoState::new(&cfg).unwrap();
        for _ in 0..30 {
            state.ingest(arr1(&[0.0, 0.0]).view(), &cfg).unwrap();
        }
        for e in &state.estimates {
            assert!(e.values().iter().all(|&v| v == 0.0));
        }
    }

    // Linear-solve oracle: with lambda = 0 and frozen invertible statistics,
    // iterating the update converges to Phi^{-1} r.
    #[test]
    fn fixed_point_of_unregularized_update_solves_linear_system() {
        let mut next = lcg(31337);
        let dim = 6;
        let a = Array2::from_shape_fn((dim, dim), |_| next());
        let mut phi = a.t().dot(&a);
        for i in 0..dim {
            phi[[i, i]] += 0.5;
        }
        let r = vec![Array1::from_shape_fn(dim, |_| next()); 1];
        let cfg = EstimatorConfig::new(3, 2, 0.0, StepSizeSchedule::Constant { alpha: 1.0 });

        let lmax = crate::estimators::power::lambda_max_power_iteration(&phi, None, 500, 1e-12);
        let alpha = 0.9 / lmax.value;
        let mut estimates = vec![NodeEstimate::zeros(0, 3, 2)];
        for _ in 0..20_000 {
            prox_pass(&mut estimates, &phi, &r, alpha, &cfg);
        }

        let m = DMatrix::from_fn(dim, dim, |i, j| phi[[i, j]]);
        let b = DVector::from_fn(dim, |i, _| r[0][i]);
        let solution = m.lu().solve(&b).expect("phi is positive definite");
        for i in 0..dim {
            assert!(
                (estimates[0].values()[i] - solution[i]).abs() < 1e-9,
                "component {i}"
            );
        }
    }

    // Independent prox-gradient oracle, plain loops only: one tirso_step must
    // match a hand-coded stats rotation followed by the proximal update.
    #[test]
    fn step_equals_independent_prox_gradient_step() {
        let mut next = lcg(2024);
        let n_nodes = 3;
        let order = 2;
        let dim = n_nodes * order;
        let alpha = 0.17;
        let lambda = 0.08;
        let gamma = 0.96;
        let mu = 1.0 - gamma;
        let sigma2 = 0.2;

        for round in 0..100 {
            let cfg = EstimatorConfig::new(
                n_nodes,
                order,
                lambda,
                StepSizeSchedule::Constant { alpha },
            )
            .with_forgetting(gamma)
            .with_init_phi_scale(sigma2);
            let mut state = TirsoState::new(&cfg).unwrap();
            // randomize the state by streaming a few samples
            let warm = 2 + (round % 5);
            for _ in 0..(order + warm) {
                let row = Array1::from_shape_fn(n_nodes, |_| next());
                state.ingest(row.view(), &cfg).unwrap();
            }

            // freeze copies of everything the oracle needs
            let phi0: Vec<Vec<f64>> = (0..dim)
                .map(|i| (0..dim).map(|j| state.stats.phi[[i, j]]).collect())
                .collect();
            let r0: Vec<Vec<f64>> = state.r.iter().map(|r| r.to_vec()).collect();
            let a0: Vec<Vec<f64>> = state.estimates.iter().map(|e| e.values().to_vec()).collect();
            let lag1: Vec<f64> = (0..n_nodes).map(|i| state.buffer.lag(0)[i]).collect();
            let lag2: Vec<f64> = (0..n_nodes).map(|i| state.buffer.lag(1)[i]).collect();
            let y: Vec<f64> = (0..n_nodes).map(|_| next()).collect();

            state
                .ingest(Array1::from(y.clone()).view(), &cfg)
                .unwrap();

            // oracle: g in group-major order, lags innermost
            let mut g = vec![0.0; dim];
            for np in 0..n_nodes {
                g[np * order] = lag1[np];
                g[np * order + 1] = lag2[np];
            }
            // stats rotation
            let mut phi = vec![vec![0.0; dim]; dim];
            for i in 0..dim {
                for j in 0..dim {
                    phi[i][j] = gamma * phi0[i][j] + mu * g[i] * g[j];
                }
            }
            for n in 0..n_nodes {
                // r_n and gradient
                let mut r_n = vec![0.0; dim];
                for i in 0..dim {
                    r_n[i] = gamma * r0[n][i] + mu * y[n] * g[i];
                }
                let mut grad = vec![0.0; dim];
                for i in 0..dim {
                    let mut acc = 0.0;
                    for j in 0..dim {
                        acc += phi[i][j] * a0[n][j];
                    }
                    grad[i] = acc - r_n[i];
                }
                // proximal update per group
                for np in 0..n_nodes {
                    let mut zf = vec![0.0; order];
                    for k in 0..order {
                        zf[k] = a0[n][np * order + k] - alpha * grad[np * order + k];
                    }
                    let expected: Vec<f64> = if np == n {
                        zf.clone()
                    } else {
                        let norm = zf.iter().map(|v| v * v).sum::<f64>().sqrt();
                        if norm <= alpha * lambda {
                            vec![0.0; order]
                        } else {
                            let f = 1.0 - alpha * lambda / norm;
                            zf.iter().map(|v| v * f).collect()
                        }
                    };
                    for k in 0..order {
                        let got = state.estimates[n].values()[np * order + k];
                        assert!(
                            (got - expected[k]).abs() < 1e-12,
                            "round {round} node {n} group {np} lag {k}: {got} vs {}",
                            expected[k]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn pgd_with_one_inner_iteration_is_bitwise_tirso() {
        let mut next = lcg(555);
        let cfg = EstimatorConfig::new(3, 2, 0.05, StepSizeSchedule::Constant { alpha: 0.2 })
            .with_forgetting(0.98)
            .with_init_phi_scale(0.1);
        let mut tirso = TirsoState::new(&cfg).unwrap();
        let mut pgd = TirsoState::new(&cfg).unwrap();
        for t in 0..40 {
            let row = Array1::from_shape_fn(3, |_| next());
            if t < 2 {
                tirso.ingest(row.view(), &cfg).unwrap();
                pgd.ingest(row.view(), &cfg).unwrap();
            } else {
                tirso_step(&mut tirso, row.view(), &cfg).unwrap();
                pgd_tirso_step(&mut pgd, row.view(), &cfg, 1).unwrap();
            }
        }
        for n in 0..3 {
            assert_eq!(tirso.estimates[n].values(), pgd.estimates[n].values());
        }
    }
}
