use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{DataError, FeatureMatrix, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    #[serde(default = "default_fraction")]
    pub train_fraction: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_shuffle")]
    pub shuffle: bool,
}

fn default_fraction() -> f64 {
    0.7
}

fn default_shuffle() -> bool {
    true
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            train_fraction: default_fraction(),
            seed: 0,
            shuffle: true,
        }
    }
}

/// Train/test row indices. Train size is `round_half_up(n * train_fraction)`.
pub fn split_indices(n: usize, spec: &SplitSpec) -> Result<(Vec<usize>, Vec<usize>)> {
    if n < 2 {
        return Err(DataError::InvalidSplit(format!(
            "need at least 2 rows, got {n}"
        )));
    }
    let f = spec.train_fraction;
    if !(f > 0.0 && f < 1.0) {
        return Err(DataError::InvalidSplit(format!(
            "train fraction {f} outside (0, 1)"
        )));
    }
    let n_train = (n as f64 * f + 0.5).floor() as usize;
    if n_train == 0 || n_train >= n {
        return Err(DataError::InvalidSplit(format!(
            "fraction {f} of {n} rows leaves an empty partition"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    if spec.shuffle {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        order.shuffle(&mut rng);
    }
    let test = order.split_off(n_train);
    Ok((order, test))
}

pub fn split(matrix: &FeatureMatrix, spec: &SplitSpec) -> Result<(FeatureMatrix, FeatureMatrix)> {
    let (train, test) = split_indices(matrix.n_rows(), spec)?;
    Ok((matrix.select(&train), matrix.select(&test)))
}
