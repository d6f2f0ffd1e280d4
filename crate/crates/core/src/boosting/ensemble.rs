use serde::{Deserialize, Serialize};

use super::adaboost::{learner_weight, update_weights, weighted_error};
use super::{init_weights, BoostError, Result, WeightVector};
use crate::dataset::FeatureMatrix;
use crate::flatfile::{FlatReader, FlatWriter};
use crate::lstm::{LstmModel, TrainConfig};
use crate::seed;
use crate::trees::{tree_fit, TreeConfig, TreeNode};
use crate::Prediction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LearnerKind {
    Lstm,
    Tree,
}

impl LearnerKind {
    fn as_str(self) -> &'static str {
        match self {
            LearnerKind::Lstm => "lstm",
            LearnerKind::Tree => "tree",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoostConfig {
    pub n_rounds: usize,
    pub learner: LearnerKind,
    /// Base LSTM settings; `hidden_size` and `seed` are replaced per round.
    pub lstm: TrainConfig,
    /// Round `m` uses `hidden_sizes[m % len]`.
    pub hidden_sizes: Vec<usize>,
    pub tree: TreeConfig,
    pub seed: u64,
    pub epsilon_min: f64,
}

impl Default for BoostConfig {
    fn default() -> Self {
        Self {
            n_rounds: 20,
            learner: LearnerKind::Lstm,
            lstm: TrainConfig {
                epochs: 75,
                ..TrainConfig::default()
            },
            hidden_sizes: vec![8, 12, 16],
            tree: TreeConfig {
                max_depth: 1,
                min_samples_leaf: 1,
                min_weight_leaf: 0.0,
            },
            seed: 0,
            epsilon_min: 1e-10,
        }
    }
}

impl BoostConfig {
    fn validate(&self) -> Result<()> {
        let ok = self.n_rounds >= 1
            && !self.hidden_sizes.is_empty()
            && self.hidden_sizes.iter().all(|&h| h > 0)
            && self.epsilon_min > 0.0
            && self.epsilon_min < 0.5;
        if ok {
            Ok(())
        } else {
            Err(BoostError::Config(format!("{self:?}")))
        }
    }

    /// LSTM settings of round `m` (0-based).
    pub fn round_lstm_config(&self, m: usize) -> TrainConfig {
        TrainConfig {
            hidden_size: self.hidden_sizes[m % self.hidden_sizes.len()],
            seed: seed::derive(self.seed, "boost-round", m as u64),
            ..self.lstm.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeakLearner {
    Lstm(LstmModel),
    Tree(TreeNode),
}

impl WeakLearner {
    pub fn kind(&self) -> LearnerKind {
        match self {
            WeakLearner::Lstm(_) => LearnerKind::Lstm,
            WeakLearner::Tree(_) => LearnerKind::Tree,
        }
    }

    /// Hard labels in `{0, 1}`.
    pub fn predict_labels(&self, matrix: &FeatureMatrix) -> Result<Vec<u8>> {
        Ok(match self {
            WeakLearner::Lstm(m) => m.predict(matrix)?.labels,
            WeakLearner::Tree(t) => Prediction::from_probabilities(t.predict_raw(matrix)?).labels,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoostRound {
    pub learner: WeakLearner,
    pub epsilon: f64,
    pub alpha: f64,
}

/// Weighted vote of the recorded rounds, bound to the preprocessing that
/// produced its training matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleModel {
    pub learner_kind: LearnerKind,
    pub rounds: Vec<BoostRound>,
    /// [`FeatureMatrix::fingerprint`] of the training matrix.
    pub fingerprint: String,
}

impl EnsembleModel {
    /// The first `k` rounds as a model of their own.
    pub fn truncated(&self, k: usize) -> EnsembleModel {
        EnsembleModel {
            learner_kind: self.learner_kind,
            rounds: self.rounds[..k.min(self.rounds.len())].to_vec(),
            fingerprint: self.fingerprint.clone(),
        }
    }

    fn check(&self, matrix: &FeatureMatrix) -> Result<()> {
        let found = matrix.fingerprint();
        if found != self.fingerprint {
            return Err(BoostError::Fingerprint {
                expected: self.fingerprint.clone(),
                found,
            });
        }
        Ok(())
    }

    /// Scores mapped through `sigmoid(2 * score)`, the logistic reading of the
    /// exponential loss; labels come from the sign rule.
    pub fn predict(&self, matrix: &FeatureMatrix) -> Result<Prediction> {
        let scores = ensemble_score(self, matrix)?;
        let labels = scores.iter().map(|&s| u8::from(s >= 0.0)).collect();
        let probabilities = scores
            .iter()
            .map(|&s| 1.0 / (1.0 + (-2.0 * s).exp()))
            .collect();
        Ok(Prediction {
            probabilities,
            labels,
        })
    }

    pub fn write_flat(&self, w: &mut FlatWriter) {
        w.value("ensemble", "v1");
        w.value("kind", self.learner_kind.as_str());
        w.value("fingerprint", &self.fingerprint);
        w.value("rounds", self.rounds.len());
        let alphas: Vec<f64> = self.rounds.iter().map(|r| r.alpha).collect();
        let epsilons: Vec<f64> = self.rounds.iter().map(|r| r.epsilon).collect();
        w.reals("alpha", &alphas);
        w.reals("epsilon", &epsilons);
        for r in &self.rounds {
            match &r.learner {
                WeakLearner::Lstm(m) => m.write_flat(w),
                WeakLearner::Tree(t) => t.write_flat(w),
            }
        }
    }

    pub fn read_flat(r: &mut FlatReader<'_>) -> Result<Self> {
        let version = r.text("ensemble")?;
        if version != "v1" {
            return Err(BoostError::Config(format!(
                "unsupported ensemble version {version}"
            )));
        }
        let learner_kind = match r.text("kind")?.as_str() {
            "lstm" => LearnerKind::Lstm,
            "tree" => LearnerKind::Tree,
            other => return Err(BoostError::Config(format!("unknown learner kind {other}"))),
        };
        let fingerprint = r.text("fingerprint")?;
        let n: usize = r.parse("rounds")?;
        let alphas = r.reals("alpha", n)?;
        let epsilons = r.reals("epsilon", n)?;
        let mut rounds = Vec::with_capacity(n);
        for (alpha, epsilon) in alphas.into_iter().zip(epsilons) {
            let learner = match learner_kind {
                LearnerKind::Lstm => WeakLearner::Lstm(LstmModel::read_flat(r)?),
                LearnerKind::Tree => WeakLearner::Tree(TreeNode::read_flat(r)?),
            };
            rounds.push(BoostRound {
                learner,
                epsilon,
                alpha,
            });
        }
        Ok(Self {
            learner_kind,
            rounds,
            fingerprint,
        })
    }
}

/// `sum_m alpha_m * h_m(x)` with `h_m` in `{-1, +1}`.
pub fn ensemble_score(model: &EnsembleModel, matrix: &FeatureMatrix) -> Result<Vec<f64>> {
    model.check(matrix)?;
    let mut scores = vec![0.0; matrix.n_rows()];
    for round in &model.rounds {
        let labels = round.learner.predict_labels(matrix)?;
        for (s, &h) in scores.iter_mut().zip(&labels) {
            *s += if h == 1 { round.alpha } else { -round.alpha };
        }
    }
    Ok(scores)
}

/// Label 1 iff the score is at least 0.
pub fn ensemble_predict(model: &EnsembleModel, matrix: &FeatureMatrix) -> Result<Vec<u8>> {
    Ok(ensemble_score(model, matrix)?
        .into_iter()
        .map(|s| u8::from(s >= 0.0))
        .collect())
}

fn fit_learner(
    config: &BoostConfig,
    m: usize,
    trainset: &FeatureMatrix,
    w: &WeightVector,
) -> Result<WeakLearner> {
    Ok(match config.learner {
        LearnerKind::Lstm => {
            WeakLearner::Lstm(LstmModel::fit(&config.round_lstm_config(m), trainset, w)?)
        }
        LearnerKind::Tree => WeakLearner::Tree(tree_fit(trainset, w, &config.tree)?),
    })
}

/// Runs up to `n_rounds` rounds. A round whose weighted error reaches 0.5 is
/// discarded and ends training; a round at or below `epsilon_min` is kept and
/// ends training.
pub fn boost_fit(config: &BoostConfig, trainset: &FeatureMatrix) -> Result<EnsembleModel> {
    config.validate()?;
    let labels = trainset.labels();
    let mut weights = init_weights(trainset.n_rows())?;
    let mut rounds = Vec::new();
    let mut first_epsilon = None;
    for m in 0..config.n_rounds {
        let learner = fit_learner(config, m, trainset, &weights)?;
        let preds = learner.predict_labels(trainset)?;
        let epsilon = weighted_error(&preds, labels, &weights)?;
        first_epsilon.get_or_insert(epsilon);
        if epsilon >= 0.5 {
            break;
        }
        let alpha = learner_weight(epsilon, config.epsilon_min);
        rounds.push(BoostRound {
            learner,
            epsilon,
            alpha,
        });
        if epsilon <= config.epsilon_min {
            break;
        }
        weights = update_weights(&weights, &preds, labels, alpha)?;
    }
    if rounds.is_empty() {
        return Err(BoostError::NoRounds {
            epsilon: first_epsilon.unwrap_or(f64::NAN),
        });
    }
    Ok(EnsembleModel {
        learner_kind: config.learner,
        rounds,
        fingerprint: trainset.fingerprint(),
    })
}
