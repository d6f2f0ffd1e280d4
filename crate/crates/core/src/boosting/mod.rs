//! Discrete two-class AdaBoost over LSTM or CART weak learners.

mod adaboost;
mod ensemble;
mod weights;

use thiserror::Error;

use crate::flatfile::FormatError;
use crate::lstm::LstmError;
use crate::trees::TreeError;

pub use adaboost::{learner_weight, update_weights, weighted_error};
pub use ensemble::{
    boost_fit, ensemble_predict, ensemble_score, BoostConfig, BoostRound, EnsembleModel,
    LearnerKind, WeakLearner,
};
pub use weights::{init_weights, WeightVector};

#[derive(Debug, Error)]
pub enum BoostError {
    #[error("weight vector is empty")]
    EmptyWeights,
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid boosting config: {0}")]
    Config(String),
    #[error("no rounds recorded: first weak learner has weighted error {epsilon} >= 0.5")]
    NoRounds { epsilon: f64 },
    #[error("preprocessing fingerprint mismatch: model trained on {expected}, got {found}")]
    Fingerprint { expected: String, found: String },
    #[error(transparent)]
    Lstm(#[from] LstmError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

pub type Result<T> = std::result::Result<T, BoostError>;
