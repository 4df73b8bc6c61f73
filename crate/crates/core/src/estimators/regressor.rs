use std::collections::VecDeque;

use ndarray::{Array1, ArrayView1};

use crate::error::{Error, Result};

/// Stacked lag vector g[t] = vec([y[t-1], ..., y[t-P]]^T) of length N*P.
///
/// Group n' occupies positions n'*P .. (n'+1)*P and holds
/// [y_{n'}[t-1], ..., y_{n'}[t-P]], so g^T a_n sums
/// a_{n,n'}^{(p)} y_{n'}[t-p] over groups and lags.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressorVector {
    order: usize,
    values: Array1<f64>,
}

impl RegressorVector {
    pub fn new(values: Array1<f64>, order: usize) -> Result<Self> {
        if order == 0 || values.len() % order != 0 {
            return Err(Error::DimensionMismatch(format!(
                "regressor length {} is not a multiple of order {}",
                values.len(),
                order
            )));
        }
        Ok(Self { order, values })
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

    pub fn group(&self, n_prime: usize) -> ArrayView1<'_, f64> {
        self.values
            .slice(ndarray::s![n_prime * self.order..(n_prime + 1) * self.order])
    }
}

/// Rolling window of the last P data vectors, most recent first.
#[derive(Debug, Clone)]
pub struct LagBuffer {
    n_nodes: usize,
    order: usize,
    slots: VecDeque<Array1<f64>>,
}

impl LagBuffer {
    pub fn new(n_nodes: usize, order: usize) -> Self {
        Self {
            n_nodes,
            order,
            slots: VecDeque::with_capacity(order),
        }
    }

    pub fn is_full(&self) -> bool {
        self.slots.len() == self.order
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn push(&mut self, sample: ArrayView1<'_, f64>) -> Result<()> {
        if sample.len() != self.n_nodes {
            return Err(Error::DimensionMismatch(format!(
                "sample has {} entries, expected {}",
                sample.len(),
                self.n_nodes
            )));
        }
        if self.slots.len() == self.order {
            self.slots.pop_back();
        }
        self.slots.push_front(sample.to_owned());
        Ok(())
    }

    /// Lag vector y[t-1-k] for k in 0..filled.
    pub fn lag(&self, k: usize) -> &Array1<f64> {
        &self.slots[k]
    }

    pub fn regressor(&self) -> Result<RegressorVector> {
        build_regressor(self)
    }
}

/// Pack the buffer into the regressor ordering of the per-node problem.
pub fn build_regressor(buffer: &LagBuffer) -> Result<RegressorVector> {
    if !buffer.is_full() {
        return Err(Error::InvalidParameter(format!(
            "lag buffer holds {} of {} required vectors",
            buffer.len(),
            buffer.order
        )));
    }
    let n = buffer.n_nodes;
    let p = buffer.order;
    let mut values = Array1::zeros(n * p);
    for n_prime in 0..n {
        for lag in 0..p {
            values[n_prime * p + lag] = buffer.slots[lag][n_prime];
        }
    }
    RegressorVector::new(values, p)
}
