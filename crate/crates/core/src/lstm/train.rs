use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cell::{check_layout, forward_cached};
use super::grad::loss_and_gradient;
use super::{LstmError, LstmParams, Result, SequenceLayout, TrainConfig};
use crate::boosting::WeightVector;
use crate::dataset::FeatureMatrix;
use crate::flatfile::{FlatReader, FlatWriter};
use crate::Prediction;

/// Weights uniform in `[-init_scale, init_scale]`, drawn block by block in
/// declared order; `b_f = 1`, all other biases 0.
pub fn init_params(config: &TrainConfig, input_dim: usize) -> LstmParams {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut p = LstmParams::zeros(config.hidden_size, input_dim);
    let s = config.init_scale;
    for block in [&mut p.w_f, &mut p.w_i, &mut p.w_c, &mut p.w_o, &mut p.w_out] {
        for v in block.iter_mut() {
            *v = rng.gen_range(-s..=s);
        }
    }
    p.b_f.iter_mut().for_each(|b| *b = 1.0);
    p
}

/// Full-batch gradient descent on the weighted loss with global-norm clipping.
pub fn train(
    config: &TrainConfig,
    trainset: &FeatureMatrix,
    weights: &WeightVector,
) -> Result<LstmParams> {
    config.validate()?;
    let layout = SequenceLayout::unrolled(trainset.n_cols());
    let mut params = init_params(config, layout.input_dim);
    for epoch in 0..config.epochs {
        let (loss, mut grad) = loss_and_gradient(&params, trainset, weights, layout)?;
        if !loss.is_finite() {
            return Err(LstmError::Diverged(epoch));
        }
        let norm = grad.l2_norm();
        if norm > config.grad_clip {
            grad.scale(config.grad_clip / norm);
        }
        params.add_scaled(&grad, -config.learning_rate);
    }
    Ok(params)
}

/// Probabilities and `p >= 0.5` labels for every row.
pub fn predict(
    params: &LstmParams,
    matrix: &FeatureMatrix,
    layout: SequenceLayout,
) -> Result<Prediction> {
    check_layout(params, matrix.n_cols(), layout)?;
    let mut caches = Vec::new();
    let probs: Vec<f64> = matrix
        .rows()
        .map(|row| forward_cached(params, row, layout, &mut caches))
        .collect();
    if probs.iter().any(|p| !p.is_finite()) {
        return Err(LstmError::NonFinite("prediction".into()));
    }
    Ok(Prediction::from_probabilities(probs))
}

/// Trained parameters with the layout and config that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmModel {
    pub params: LstmParams,
    pub layout: SequenceLayout,
    pub config: TrainConfig,
}

impl LstmModel {
    pub fn fit(
        config: &TrainConfig,
        trainset: &FeatureMatrix,
        weights: &WeightVector,
    ) -> Result<Self> {
        Ok(Self {
            params: train(config, trainset, weights)?,
            layout: SequenceLayout::unrolled(trainset.n_cols()),
            config: config.clone(),
        })
    }

    pub fn predict(&self, matrix: &FeatureMatrix) -> Result<Prediction> {
        predict(&self.params, matrix, self.layout)
    }

    pub fn write_flat(&self, w: &mut FlatWriter) {
        w.value("lstm", "v1");
        w.value("steps", self.layout.steps);
        self.config.write_flat(w);
        self.params.write_flat(w);
    }

    pub fn read_flat(r: &mut FlatReader<'_>) -> Result<Self> {
        let version = r.text("lstm")?;
        if version != "v1" {
            return Err(LstmError::Config(format!(
                "unsupported lstm block version {version}"
            )));
        }
        let steps = r.parse("steps")?;
        let config = TrainConfig::read_flat(r)?;
        let params = LstmParams::read_flat(r)?;
        Ok(Self {
            layout: SequenceLayout {
                steps,
                input_dim: params.input_dim,
            },
            params,
            config,
        })
    }
}
