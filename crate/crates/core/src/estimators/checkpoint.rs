use std::path::Path;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use super::config::NodeEstimate;
use super::tirso::TirsoState;
use crate::error::{Error, Result};
use crate::matio::{read_matrix_csv, write_matrix_csv};

/// Frozen estimator state: metadata JSON plus CSV matrix payloads for Phi,
/// the cross-correlation vectors, and the estimates. Hindsight solutions are
/// stored in the same layout with an empty Phi/r.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckpointMeta {
    pub algorithm: String,
    pub n_nodes: usize,
    pub order: usize,
    pub gamma: f64,
    pub lambda: f64,
    pub t: usize,
}

#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub meta: CheckpointMeta,
    pub phi: Option<Array2<f64>>,
    pub r: Option<Array2<f64>>,
    pub estimates: Vec<NodeEstimate>,
}

impl Checkpoint {
    pub fn from_tirso(state: &TirsoState, algorithm: &str, gamma: f64, lambda: f64) -> Self {
        let n = state.estimates.len();
        let dim = state.estimates[0].values().len();
        let mut r = Array2::zeros((n, dim));
        for (i, r_n) in state.r.iter().enumerate() {
            r.row_mut(i).assign(r_n);
        }
        Self {
            meta: CheckpointMeta {
                algorithm: algorithm.to_string(),
                n_nodes: n,
                order: state.estimates[0].order(),
                gamma,
                lambda,
                t: state.t(),
            },
            phi: Some(state.phi().clone()),
            r: Some(r),
            estimates: state.estimates.clone(),
        }
    }

    pub fn from_estimates(
        estimates: &[NodeEstimate],
        algorithm: &str,
        gamma: f64,
        lambda: f64,
        t: usize,
    ) -> Self {
        Self {
            meta: CheckpointMeta {
                algorithm: algorithm.to_string(),
                n_nodes: estimates.len(),
                order: estimates[0].order(),
                gamma,
                lambda,
                t,
            },
            phi: None,
            r: None,
            estimates: estimates.to_vec(),
        }
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let file = std::fs::File::create(dir.join("checkpoint.json"))?;
        serde_json::to_writer_pretty(file, &self.meta)?;
        if let Some(phi) = &self.phi {
            write_matrix_csv(&dir.join("phi.csv"), phi)?;
        }
        if let Some(r) = &self.r {
            write_matrix_csv(&dir.join("r.csv"), r)?;
        }
        let n = self.estimates.len();
        let dim = self.estimates[0].values().len();
        let mut est = Array2::zeros((n, dim));
        for (i, e) in self.estimates.iter().enumerate() {
            est.row_mut(i).assign(e.values());
        }
        write_matrix_csv(&dir.join("estimates.csv"), &est)?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let file = std::fs::File::open(dir.join("checkpoint.json"))?;
        let meta: CheckpointMeta = serde_json::from_reader(file)?;
        let phi_path = dir.join("phi.csv");
        let phi = phi_path.exists().then(|| read_matrix_csv(&phi_path)).transpose()?;
        let r_path = dir.join("r.csv");
        let r = r_path.exists().then(|| read_matrix_csv(&r_path)).transpose()?;
        let est = read_matrix_csv(&dir.join("estimates.csv"))?;
        if est.nrows() != meta.n_nodes || est.ncols() != meta.n_nodes * meta.order {
            return Err(Error::DimensionMismatch(format!(
                "estimates payload {}x{} does not match metadata N={} P={}",
                est.nrows(),
                est.ncols(),
                meta.n_nodes,
                meta.order
            )));
        }
        let estimates = est
            .rows()
            .into_iter()
            .enumerate()
            .map(|(n, row)| {
                NodeEstimate::from_values(n, meta.order, Array1::from(row.to_vec()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            meta,
            phi,
            r,
            estimates,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::config::EstimatorConfig;
    use crate::estimators::schedule::StepSizeSchedule;
    use ndarray::Array1;

    #[test]
    fn tirso_checkpoint_round_trips() {
        let cfg = EstimatorConfig::new(3, 2, 0.01, StepSizeSchedule::Constant { alpha: 0.1 })
            .with_forgetting(0.97);
        let mut state = TirsoState::new(&cfg).unwrap();
        let mut x = 9u64;
        for _ in 0..20 {
            let row = Array1::from_shape_fn(3, |_| {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1);
                ((x >> 11) as f64) / (1u64 << 53) as f64 - 0.5
            });
            state.ingest(row.view(), &cfg).unwrap();
        }
        let ckpt = Checkpoint::from_tirso(&state, "tirso", 0.97, 0.01);
        let dir = tempfile::tempdir().unwrap();
        ckpt.save(dir.path()).unwrap();
        let back = Checkpoint::load(dir.path()).unwrap();
        assert_eq!(back.meta.t, state.t());
        assert_eq!(back.phi.as_ref().unwrap(), state.phi());
        for n in 0..3 {
            assert_eq!(back.estimates[n].values(), state.estimates[n].values());
        }
    }
}
