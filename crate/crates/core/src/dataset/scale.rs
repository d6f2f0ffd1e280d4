use serde::{Deserialize, Serialize};

use super::{DataError, FeatureMatrix, Result};

/// Per-feature z-score parameters (`scale > 0`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub center: Vec<f64>,
    pub scale: Vec<f64>,
}

impl ScalerParams {
    pub fn identity(n: usize) -> Self {
        Self {
            center: vec![0.0; n],
            scale: vec![1.0; n],
        }
    }
}

/// Fits population mean/std per feature and returns the standardized matrix.
/// Constant features are centered with scale 1.
pub fn fit_standardize(matrix: &FeatureMatrix) -> Result<(FeatureMatrix, ScalerParams)> {
    let (n, f) = (matrix.n_rows(), matrix.n_cols());
    if n == 0 {
        return Err(DataError::NoRows);
    }
    let mut center = vec![0.0; f];
    let mut scale = vec![1.0; f];
    for j in 0..f {
        let col: Vec<f64> = (0..n).map(|i| matrix.get(i, j)).collect();
        let mean = col.iter().sum::<f64>() / n as f64;
        let (lo, hi) = col
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
                (a.min(v), b.max(v))
            });
        center[j] = mean;
        if hi > lo {
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
            scale[j] = var.sqrt();
        } else {
            center[j] = lo;
        }
        if !scale[j].is_finite() || scale[j] <= 0.0 || !center[j].is_finite() {
            return Err(DataError::NonFinite {
                column: matrix.feature_names()[j].clone(),
            });
        }
    }
    let params = ScalerParams { center, scale };
    let out = apply_standardize(matrix, &params)?;
    Ok((out, params))
}

/// Applies stored parameters verbatim: `(x - center) / scale`.
pub fn apply_standardize(matrix: &FeatureMatrix, params: &ScalerParams) -> Result<FeatureMatrix> {
    let f = matrix.n_cols();
    if params.center.len() != f || params.scale.len() != f {
        return Err(DataError::Dimension(format!(
            "scaler has {} features, matrix has {f}",
            params.center.len()
        )));
    }
    let mut out = matrix.clone();
    for (k, v) in out.values_mut().iter_mut().enumerate() {
        let j = k % f;
        *v = (*v - params.center[j]) / params.scale[j];
        if !v.is_finite() {
            return Err(DataError::NonFinite {
                column: matrix.feature_names()[j].clone(),
            });
        }
    }
    out.set_scaler(Some(params.clone()));
    Ok(out)
}
