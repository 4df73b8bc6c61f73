//! Header-less CSV payloads for dense matrices and vectors.

use std::path::Path;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

pub fn write_matrix_csv(path: &Path, m: &Array2<f64>) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    for row in m.rows() {
        let record: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_matrix_csv(path: &Path) -> Result<Array2<f64>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).from_path(path)?;
    let mut values = Vec::new();
    let mut rows = 0usize;
    let mut cols = None;
    for record in reader.records() {
        let record = record?;
        match cols {
            None => cols = Some(record.len()),
            Some(c) if c != record.len() => {
                return Err(Error::Ingest(format!(
                    "ragged matrix csv at row {rows}: {} vs {c} columns",
                    record.len()
                )))
            }
            _ => {}
        }
        for field in record.iter() {
            values.push(
                field
                    .parse::<f64>()
                    .map_err(|e| Error::Ingest(format!("bad float {field:?}: {e}")))?,
            );
        }
        rows += 1;
    }
    let cols = cols.unwrap_or(0);
    Array2::from_shape_vec((rows, cols), values)
        .map_err(|e| Error::Ingest(format!("matrix shape: {e}")))
}

pub fn write_vector_csv(path: &Path, v: &Array1<f64>) -> Result<()> {
    let m = v.view().insert_axis(ndarray::Axis(0)).to_owned();
    write_matrix_csv(path, &m)
}

pub fn read_vector_csv(path: &Path) -> Result<Array1<f64>> {
    let m = read_matrix_csv(path)?;
    if m.nrows() != 1 {
        return Err(Error::Ingest(format!(
            "expected a single-row vector csv, got {} rows",
            m.nrows()
        )));
    }
    Ok(m.row(0).to_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::arr2;

    #[test]
    fn matrix_round_trips_exactly() {
        let m = arr2(&[[1.0, -2.5e-17, 3.0], [0.1 + 0.2, f64::MIN_POSITIVE, 9.9]]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        write_matrix_csv(&path, &m).unwrap();
        let back = read_matrix_csv(&path).unwrap();
        assert_eq!(back, m);
    }
}
