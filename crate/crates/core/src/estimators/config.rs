use ndarray::{Array1, Array2, ArrayView1, ArrayViewMut1};

use super::schedule::StepSizeSchedule;
use crate::error::{Error, Result};

/// Per-node coefficient vector a_n, length N*P, partitioned into N groups of
/// length P in the same ordering as `RegressorVector`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeEstimate {
    node: usize,
    order: usize,
    values: Array1<f64>,
}

impl NodeEstimate {
    pub fn zeros(node: usize, n_nodes: usize, order: usize) -> Self {
        Self {
            node,
            order,
            values: Array1::zeros(n_nodes * order),
        }
    }

    pub fn from_values(node: usize, order: usize, values: Array1<f64>) -> Result<Self> {
        if order == 0 || values.len() % order != 0 {
            return Err(Error::DimensionMismatch(format!(
                "estimate length {} is not a multiple of order {}",
                values.len(),
                order
            )));
        }
        Ok(Self {
            node,
            order,
            values,
        })
    }

    pub fn node(&self) -> usize {
        self.node
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn n_nodes(&self) -> usize {
        self.values.len() / self.order
    }

    pub fn values(&self) -> &Array1<f64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array1<f64> {
        &mut self.values
    }

    pub fn group(&self, n_prime: usize) -> ArrayView1<'_, f64> {
        self.values
            .slice(ndarray::s![n_prime * self.order..(n_prime + 1) * self.order])
    }

    pub fn group_mut(&mut self, n_prime: usize) -> ArrayViewMut1<'_, f64> {
        self.values
            .slice_mut(ndarray::s![n_prime * self.order..(n_prime + 1) * self.order])
    }

    pub fn group_norm(&self, n_prime: usize) -> f64 {
        self.group(n_prime).iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Count of off-diagonal groups that are exactly zero.
    pub fn zero_group_count(&self) -> usize {
        (0..self.n_nodes())
            .filter(|&n_prime| n_prime != self.node && self.group(n_prime).iter().all(|&v| v == 0.0))
            .count()
    }
}

/// Shared configuration of the online estimators.
#[derive(Debug, Clone)]
pub struct EstimatorConfig {
    pub n_nodes: usize,
    pub order: usize,
    /// Group-lasso weight applied to every off-diagonal group.
    pub reg_lambda: f64,
    /// Optional edge-dependent weights; the diagonal is forced to zero
    /// regardless of its contents.
    pub per_edge_lambda: Option<Array2<f64>>,
    pub schedule: StepSizeSchedule,
    /// Forgetting factor gamma (TIRSO statistics; mu = 1 - gamma is implied).
    pub forgetting: f64,
    /// Initial Phi scale sigma^2: Phi[P-1] = sigma^2 I.
    pub init_phi_scale: f64,
}

impl EstimatorConfig {
    pub fn new(n_nodes: usize, order: usize, reg_lambda: f64, schedule: StepSizeSchedule) -> Self {
        Self {
            n_nodes,
            order,
            reg_lambda,
            per_edge_lambda: None,
            schedule,
            forgetting: 0.99,
            init_phi_scale: 0.01,
        }
    }

    pub fn with_forgetting(mut self, gamma: f64) -> Self {
        self.forgetting = gamma;
        self
    }

    pub fn with_init_phi_scale(mut self, sigma2: f64) -> Self {
        self.init_phi_scale = sigma2;
        self
    }

    pub fn with_per_edge_lambda(mut self, weights: Array2<f64>) -> Self {
        self.per_edge_lambda = Some(weights);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_nodes == 0 || self.order == 0 {
            return Err(Error::InvalidParameter(
                "n_nodes and order must be >= 1".into(),
            ));
        }
        if self.reg_lambda < 0.0 {
            return Err(Error::InvalidParameter("reg_lambda must be >= 0".into()));
        }
        if !(self.forgetting > 0.0 && self.forgetting < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "forgetting factor must lie in (0, 1), got {}",
                self.forgetting
            )));
        }
        if self.init_phi_scale < 0.0 {
            return Err(Error::InvalidParameter("init_phi_scale must be >= 0".into()));
        }
        if let Some(w) = &self.per_edge_lambda {
            if w.dim() != (self.n_nodes, self.n_nodes) {
                return Err(Error::DimensionMismatch(format!(
                    "per_edge_lambda must be {0}x{0}",
                    self.n_nodes
                )));
            }
            for ((i, j), &v) in w.indexed_iter() {
                if i != j && v < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "per_edge_lambda[{i}][{j}] must be >= 0"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn mu(&self) -> f64 {
        1.0 - self.forgetting
    }

    /// Regularization weight of group (n, n'); zero on the diagonal
    /// (self-loops are never regularized).
    pub fn lambda_for(&self, n: usize, n_prime: usize) -> f64 {
        if n == n_prime {
            return 0.0;
        }
        match &self.per_edge_lambda {
            Some(w) => w[[n, n_prime]],
            None => self.reg_lambda,
        }
    }

    /// Value of the regularizer Omega at a node estimate.
    pub fn regularizer_value(&self, estimate: &NodeEstimate) -> f64 {
        let n = estimate.node();
        (0..self.n_nodes)
            .filter(|&n_prime| n_prime != n)
            .map(|n_prime| self.lambda_for(n, n_prime) * estimate.group_norm(n_prime))
            .sum()
    }
}
