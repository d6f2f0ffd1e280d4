//! Confusion matrices, classification metrics and model comparison.

mod compare;
mod metrics;

use thiserror::Error;

pub use compare::{compare, ComparisonReport, ComparisonRow, ModelReport};
pub use metrics::{confusion, metrics, ClassMetrics, ConfusionMatrix, MetricsReport};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("length mismatch: {preds} predictions for {labels} labels")]
    Length { preds: usize, labels: usize },
    #[error("row {index}: prediction {pred} / label {label} outside {{0, 1}}")]
    Domain { index: usize, pred: u8, label: u8 },
    #[error("confusion matrix is empty")]
    Empty,
    #[error("duplicate model name `{0}`")]
    DuplicateModel(String),
    #[error("no models to compare")]
    NoModels,
}

pub type Result<T> = std::result::Result<T, EvalError>;
