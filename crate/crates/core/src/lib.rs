//! Ad-click prediction with AdaBoost over LSTM weak learners.
//!
//! The crate is organised bottom-up:
//!
//! * [`dataset`]: CSV ingestion for the advertising schema, descriptive
//!   statistics, feature encoding, z-score scaling, seeded train/test split
//!   and a synthetic generator with a known Bayes rate.
//! * [`lstm`]: a single-layer LSTM binary classifier with exact
//!   backpropagation through time and a sample-weighted trainer.
//! * [`trees`]: weighted CART, a bootstrap random forest and a second-order
//!   regularised gradient-boosted tree learner.
//! * [`boosting`]: discrete AdaBoost over LSTM or tree weak learners.
//! * [`eval`]: confusion matrices, support-weighted metrics and model
//!   comparison reports.
//! * [`cli`]: the `clickboost` experiment runner.

pub mod boosting;
pub mod cli;
pub mod dataset;
pub mod eval;
pub mod flatfile;
pub mod lstm;
pub mod seed;
pub mod trees;

pub use boosting::{EnsembleModel, WeightVector};
pub use dataset::{FeatureMatrix, RawTable, ScalerParams};
pub use eval::{ConfusionMatrix, MetricsReport};
pub use lstm::LstmParams;

/// Class-1 probabilities and their labels under the `p >= 0.5` rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub probabilities: Vec<f64>,
    pub labels: Vec<u8>,
}

impl Prediction {
    pub fn from_probabilities(probabilities: Vec<f64>) -> Self {
        let labels = probabilities.iter().map(|&p| u8::from(p >= 0.5)).collect();
        Self {
            probabilities,
            labels,
        }
    }
}
