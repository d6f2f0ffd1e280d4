use serde::{Deserialize, Serialize};

use super::{BoostError, Result};

/// Sample distribution: nonnegative entries summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector(Vec<f64>);

/// Neumaier-compensated sum; keeps renormalized vectors within a few ulps of 1.
pub(crate) fn stable_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

impl WeightVector {
    /// Equal weights `1/n`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(BoostError::EmptyWeights);
        }
        Self::from_raw(vec![1.0; n])
    }

    /// Normalizes nonnegative finite `raw` to sum 1.
    pub fn from_raw(raw: Vec<f64>) -> Result<Self> {
        if raw.is_empty() {
            return Err(BoostError::EmptyWeights);
        }
        if raw.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(BoostError::InvalidWeights(
                "negative or non-finite entry".into(),
            ));
        }
        let total = stable_sum(&raw);
        if total <= 0.0 || !total.is_finite() {
            return Err(BoostError::InvalidWeights(format!("total mass {total}")));
        }
        Ok(Self(raw.into_iter().map(|w| w / total).collect()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        stable_sum(&self.0)
    }

    /// Entries at `indices`, renormalized.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        Self::from_raw(indices.iter().map(|&i| self.0[i]).collect())
    }
}

/// Equal initial weights for `n` samples.
pub fn init_weights(n: usize) -> Result<WeightVector> {
    WeightVector::uniform(n)
}
