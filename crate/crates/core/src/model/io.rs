use std::path::Path;

use ndarray::{Array2, Array3};
use serde::{Deserialize, Serialize};

use super::graph::AdjacencyMask;
use super::params::VarParameters;
use super::simulate::TimeSeriesMatrix;
use crate::error::{Error, Result};

/// Write a series as CSV with header `t,y1,...,yN`.
pub fn write_series_csv(path: &Path, series: &TimeSeriesMatrix) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    let n = series.n_nodes();
    let mut header = Vec::with_capacity(n + 1);
    header.push("t".to_string());
    for i in 1..=n {
        header.push(format!("y{i}"));
    }
    writer.write_record(&header)?;
    let mut record = Vec::with_capacity(n + 1);
    for t in 0..series.len() {
        record.clear();
        record.push(t.to_string());
        for v in series.row(t) {
            // shortest round-trip float text; deterministic across runs
            record.push(format!("{v}"));
        }
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

/// Read a series written by `write_series_csv`.
pub fn read_series_csv(path: &Path) -> Result<TimeSeriesMatrix> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.is_empty() || &headers[0] != "t" {
        return Err(Error::Ingest(format!(
            "expected header starting with 't', got {:?}",
            headers
        )));
    }
    let n = headers.len() - 1;
    let mut rows: Vec<f64> = Vec::new();
    let mut count = 0usize;
    for record in reader.records() {
        let record = record?;
        if record.len() != n + 1 {
            return Err(Error::Ingest(format!(
                "row {} has {} fields, expected {}",
                count,
                record.len(),
                n + 1
            )));
        }
        for field in record.iter().skip(1) {
            rows.push(field.parse::<f64>().map_err(|e| {
                Error::Ingest(format!("bad float {field:?} at row {count}: {e}"))
            })?);
        }
        count += 1;
    }
    let samples = Array2::from_shape_vec((count, n), rows)
        .map_err(|e| Error::Ingest(format!("shape error: {e}")))?;
    Ok(TimeSeriesMatrix::new(samples))
}

/// JSON sidecar carrying the ground truth behind a simulated series.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundTruthSidecar {
    pub n_nodes: usize,
    pub order: usize,
    pub sigma_u: f64,
    pub seed: u64,
    pub mask: Vec<Vec<bool>>,
    /// coeffs[n][n'][p]
    pub coeffs: Vec<Vec<Vec<f64>>>,
}

impl GroundTruthSidecar {
    pub fn from_parts(
        mask: &AdjacencyMask,
        params: &VarParameters,
        sigma_u: f64,
        seed: u64,
    ) -> Self {
        let n = params.n_nodes();
        let p = params.order();
        let mask_rows = (0..n)
            .map(|i| (0..n).map(|j| mask.is_allowed(i, j)).collect())
            .collect();
        let coeffs = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..p).map(|k| params.coeffs()[[i, j, k]]).collect())
                    .collect()
            })
            .collect();
        Self {
            n_nodes: n,
            order: p,
            sigma_u,
            seed,
            mask: mask_rows,
            coeffs,
        }
    }

    pub fn params(&self) -> Result<VarParameters> {
        let mut coeffs = Array3::zeros((self.n_nodes, self.n_nodes, self.order));
        for i in 0..self.n_nodes {
            for j in 0..self.n_nodes {
                for k in 0..self.order {
                    coeffs[[i, j, k]] = self.coeffs[i][j][k];
                }
            }
        }
        VarParameters::new(coeffs)
    }

    pub fn mask(&self) -> Result<AdjacencyMask> {
        let n = self.n_nodes;
        let entries = Array2::from_shape_fn((n, n), |(i, j)| self.mask[i][j]);
        AdjacencyMask::new(entries)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(file, self)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Ok(serde_json::from_reader(file)?)
    }
}
