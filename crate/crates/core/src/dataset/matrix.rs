use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{DataError, Result, ScalerParams};

/// Dense row-major design matrix with binary labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    values: Vec<f64>,
    n_rows: usize,
    n_cols: usize,
    labels: Vec<u8>,
    feature_names: Vec<String>,
    scaler: Option<ScalerParams>,
}

impl FeatureMatrix {
    pub fn new(
        values: Vec<f64>,
        n_cols: usize,
        labels: Vec<u8>,
        feature_names: Vec<String>,
    ) -> Result<Self> {
        if feature_names.len() != n_cols {
            return Err(DataError::Dimension(format!(
                "{} feature names for {n_cols} columns",
                feature_names.len()
            )));
        }
        let n_rows = labels.len();
        if values.len() != n_rows * n_cols {
            return Err(DataError::Dimension(format!(
                "{} values for {n_rows}x{n_cols}",
                values.len()
            )));
        }
        if let Some(l) = labels.iter().find(|&&l| l > 1) {
            return Err(DataError::LabelDomain {
                row: labels.iter().position(|x| x == l).unwrap() + 1,
                value: l.to_string(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(DataError::NonFinite {
                column: feature_names[pos % n_cols.max(1)].clone(),
            });
        }
        Ok(Self {
            values,
            n_rows,
            n_cols,
            labels,
            feature_names,
            scaler: None,
        })
    }

    /// Builds a matrix from rows, naming features `x0, x1, ...`.
    pub fn from_rows(rows: &[Vec<f64>], labels: Vec<u8>) -> Result<Self> {
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(DataError::Dimension("ragged rows".into()));
        }
        let names = (0..n_cols).map(|j| format!("x{j}")).collect();
        Self::new(rows.concat(), n_cols, labels, names)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n_cols + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.n_rows).map(move |i| self.row(i))
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn scaler(&self) -> Option<&ScalerParams> {
        self.scaler.as_ref()
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub(crate) fn set_scaler(&mut self, scaler: Option<ScalerParams>) {
        self.scaler = scaler;
    }

    /// Rows at `indices`, in that order; the scaler reference is kept.
    pub fn select(&self, indices: &[usize]) -> FeatureMatrix {
        let mut values = Vec::with_capacity(indices.len() * self.n_cols);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        FeatureMatrix {
            values,
            n_rows: indices.len(),
            n_cols: self.n_cols,
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            feature_names: self.feature_names.clone(),
            scaler: self.scaler.clone(),
        }
    }

    /// Hash of the preprocessing applied to this matrix: feature names plus
    /// the exact scaler parameters. Row contents do not enter.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for name in &self.feature_names {
            h.update(name.as_bytes());
            h.update([0u8]);
        }
        match &self.scaler {
            Some(s) => {
                h.update(b"scaled");
                for (c, sc) in s.center.iter().zip(&s.scale) {
                    h.update(c.to_bits().to_le_bytes());
                    h.update(sc.to_bits().to_le_bytes());
                }
            }
            None => h.update(b"raw"),
        }
        h.finalize()[..8]
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}
