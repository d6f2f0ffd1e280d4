//! Single-layer LSTM binary classifier.
//!
//! A tabular row of `F` standardized features is read as a length-`F`
//! sequence of scalars in canonical feature order. The cell uses the standard
//! gate equations over the concatenated input `[h_{t-1}, x_t]`:
//!
//! ```text
//! f_t = sigmoid(W_f z + b_f)      i_t = sigmoid(W_i z + b_i)
//! g_t = tanh(W_c z + b_c)         o_t = sigmoid(W_o z + b_o)
//! c_t = f_t * c_{t-1} + i_t * g_t
//! h_t = o_t * tanh(c_t)
//! ```
//!
//! and the classifier head is `sigmoid(w_out . h_T + b_out)`.

mod cell;
mod grad;
mod train;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flatfile::{FlatReader, FlatWriter, FormatError};

pub use cell::{cell_step, forward, StepCache};
pub use grad::{backward, loss_and_gradient, weighted_loss, PROB_EPS};
pub use train::{init_params, predict, train, LstmModel};

#[derive(Debug, Error)]
pub enum LstmError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("non-finite gradient in parameter block `{0}`")]
    NonFiniteGradient(&'static str),
    #[error("non-finite loss at epoch {0}")]
    Diverged(usize),
    #[error("invalid training config: {0}")]
    Config(String),
    #[error(transparent)]
    Format(#[from] FormatError),
}

pub type Result<T> = std::result::Result<T, LstmError>;

pub(crate) fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Rows are fed as sequences of `steps` scalars (`input_dim = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceLayout {
    pub steps: usize,
    pub input_dim: usize,
}

impl SequenceLayout {
    /// Feature-unrolled layout for `n_features` columns.
    pub fn unrolled(n_features: usize) -> Self {
        Self {
            steps: n_features,
            input_dim: 1,
        }
    }

    pub fn width(&self) -> usize {
        self.steps * self.input_dim
    }
}

/// Gate weights, biases and output head. Each `w_*` is row-major
/// `hidden x (hidden + input_dim)` over `[h_{t-1}, x_t]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LstmParams {
    pub hidden: usize,
    pub input_dim: usize,
    pub w_f: Vec<f64>,
    pub w_i: Vec<f64>,
    pub w_c: Vec<f64>,
    pub w_o: Vec<f64>,
    pub b_f: Vec<f64>,
    pub b_i: Vec<f64>,
    pub b_c: Vec<f64>,
    pub b_o: Vec<f64>,
    pub w_out: Vec<f64>,
    pub b_out: f64,
}

pub const BLOCK_NAMES: [&str; 10] = [
    "w_f", "w_i", "w_c", "w_o", "b_f", "b_i", "b_c", "b_o", "w_out", "b_out",
];

impl LstmParams {
    pub fn zeros(hidden: usize, input_dim: usize) -> Self {
        let wn = hidden * (hidden + input_dim);
        Self {
            hidden,
            input_dim,
            w_f: vec![0.0; wn],
            w_i: vec![0.0; wn],
            w_c: vec![0.0; wn],
            w_o: vec![0.0; wn],
            b_f: vec![0.0; hidden],
            b_i: vec![0.0; hidden],
            b_c: vec![0.0; hidden],
            b_o: vec![0.0; hidden],
            w_out: vec![0.0; hidden],
            b_out: 0.0,
        }
    }

    /// Row stride of the gate matrices.
    pub fn stride(&self) -> usize {
        self.hidden + self.input_dim
    }

    /// Parameter blocks in declared order, named per [`BLOCK_NAMES`].
    pub fn blocks(&self) -> [&[f64]; 10] {
        [
            &self.w_f,
            &self.w_i,
            &self.w_c,
            &self.w_o,
            &self.b_f,
            &self.b_i,
            &self.b_c,
            &self.b_o,
            &self.w_out,
            std::slice::from_ref(&self.b_out),
        ]
    }

    pub fn blocks_mut(&mut self) -> [&mut [f64]; 10] {
        [
            &mut self.w_f,
            &mut self.w_i,
            &mut self.w_c,
            &mut self.w_o,
            &mut self.b_f,
            &mut self.b_i,
            &mut self.b_c,
            &mut self.b_o,
            &mut self.w_out,
            std::slice::from_mut(&mut self.b_out),
        ]
    }

    pub fn n_params(&self) -> usize {
        self.blocks().iter().map(|b| b.len()).sum()
    }

    /// All parameters flattened in block order.
    pub fn flat(&self) -> Vec<f64> {
        self.blocks().concat()
    }

    pub fn l2_norm(&self) -> f64 {
        self.blocks()
            .iter()
            .flat_map(|b| b.iter())
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }

    pub(crate) fn add_scaled(&mut self, other: &LstmParams, factor: f64) {
        for (dst, src) in self.blocks_mut().into_iter().zip(other.blocks()) {
            for (d, s) in dst.iter_mut().zip(src) {
                *d += factor * s;
            }
        }
    }

    pub(crate) fn scale(&mut self, factor: f64) {
        for block in self.blocks_mut() {
            for v in block.iter_mut() {
                *v *= factor;
            }
        }
    }

    pub fn write_flat(&self, w: &mut FlatWriter) {
        w.value("hidden", self.hidden);
        w.value("input_dim", self.input_dim);
        for (name, block) in BLOCK_NAMES.iter().zip(self.blocks()) {
            w.reals(name, block);
        }
    }

    pub fn read_flat(r: &mut FlatReader<'_>) -> Result<Self> {
        let hidden: usize = r.parse("hidden")?;
        let input_dim: usize = r.parse("input_dim")?;
        let mut p = Self::zeros(hidden, input_dim);
        for (name, block) in BLOCK_NAMES.iter().zip(p.blocks_mut()) {
            let values = r.reals(name, block.len())?;
            block.copy_from_slice(&values);
        }
        if p.flat().iter().any(|v| !v.is_finite()) {
            return Err(LstmError::NonFinite("stored parameters".into()));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub hidden_size: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    /// Global L2 norm cap on the gradient.
    pub grad_clip: f64,
    pub seed: u64,
    /// Initial weights are uniform in `[-init_scale, init_scale]`.
    pub init_scale: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            hidden_size: 8,
            epochs: 200,
            learning_rate: 5.0,
            grad_clip: 5.0,
            seed: 0,
            init_scale: 1.0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.hidden_size > 0
            && self.epochs > 0
            && self.learning_rate > 0.0
            && self.grad_clip > 0.0
            && self.init_scale > 0.0
            && self.learning_rate.is_finite()
            && self.grad_clip.is_finite()
            && self.init_scale.is_finite();
        if ok {
            Ok(())
        } else {
            Err(LstmError::Config(format!("{self:?}")))
        }
    }

    pub fn write_flat(&self, w: &mut FlatWriter) {
        w.value("hidden_size", self.hidden_size);
        w.value("epochs", self.epochs);
        w.real("learning_rate", self.learning_rate);
        w.real("grad_clip", self.grad_clip);
        w.value("seed", self.seed);
        w.real("init_scale", self.init_scale);
    }

    pub fn read_flat(r: &mut FlatReader<'_>) -> Result<Self> {
        Ok(Self {
            hidden_size: r.parse("hidden_size")?,
            epochs: r.parse("epochs")?,
            learning_rate: r.parse("learning_rate")?,
            grad_clip: r.parse("grad_clip")?,
            seed: r.parse("seed")?,
            init_scale: r.parse("init_scale")?,
        })
    }
}
