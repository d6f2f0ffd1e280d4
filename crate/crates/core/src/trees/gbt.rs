use serde::{Deserialize, Serialize};

use super::split::{best_split, partition, NodeStats};
use super::{to_prediction, Result, TreeConfig, TreeError, TreeNode};
use crate::dataset::FeatureMatrix;
use crate::flatfile::{FlatReader, FlatWriter};
use crate::lstm::sigmoid;
use crate::Prediction;

/// Positive rates are clamped into `[RATE_CLAMP, 1 - RATE_CLAMP]` before
/// taking log-odds, so one-class data gets a finite base score.
const RATE_CLAMP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GbtConfig {
    pub n_rounds: usize,
    pub eta: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub tree: TreeConfig,
    /// Overrides the log-odds of the training positive rate.
    pub base_score: Option<f64>,
}

impl Default for GbtConfig {
    fn default() -> Self {
        Self {
            n_rounds: 100,
            eta: 0.1,
            lambda: 1.0,
            gamma: 0.0,
            tree: TreeConfig::default(),
            base_score: None,
        }
    }
}

impl GbtConfig {
    fn validate(&self) -> Result<()> {
        self.tree.validate()?;
        let ok = self.n_rounds >= 1
            && self.eta > 0.0
            && self.eta <= 1.0
            && self.lambda >= 0.0
            && self.gamma >= 0.0
            && self.lambda.is_finite()
            && self.gamma.is_finite()
            && self.base_score.is_none_or(f64::is_finite);
        if ok {
            Ok(())
        } else {
            Err(TreeError::Config(format!("{self:?}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbtModel {
    pub trees: Vec<TreeNode>,
    pub eta: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub base_score: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct GradPair {
    pub g: f64,
    pub h: f64,
}

impl NodeStats for GradPair {
    fn add(&mut self, other: &Self) {
        self.g += other.g;
        self.h += other.h;
    }
}

/// Regularized structure score `G^2 / (H + lambda)` of one node.
fn node_score(s: &GradPair, lambda: f64) -> f64 {
    let d = s.h + lambda;
    if d > 0.0 {
        s.g * s.g / d
    } else {
        0.0
    }
}

pub(crate) fn split_gain(left: &GradPair, right: &GradPair, lambda: f64, gamma: f64) -> f64 {
    let mut parent = *left;
    parent.add(right);
    0.5 * (node_score(left, lambda) + node_score(right, lambda) - node_score(&parent, lambda))
        - gamma
}

/// Optimal leaf weight `-G / (H + lambda)`, zero when the denominator vanishes.
pub(crate) fn leaf_weight(s: &GradPair, lambda: f64) -> f64 {
    let d = s.h + lambda;
    if d > 0.0 {
        -s.g / d
    } else {
        0.0
    }
}

struct GbtGrower<'a> {
    data: &'a FeatureMatrix,
    grads: &'a [GradPair],
    tree: &'a TreeConfig,
    lambda: f64,
    gamma: f64,
}

impl GbtGrower<'_> {
    fn grow(&self, idx: &[usize], depth: usize, features: &[usize]) -> TreeNode {
        let mut total = GradPair::default();
        for &i in idx {
            total.add(&self.grads[i]);
        }
        let leaf = || TreeNode::leaf(leaf_weight(&total, self.lambda));
        if depth >= self.tree.max_depth || idx.len() < 2 * self.tree.min_samples_leaf {
            return leaf();
        }
        let mwl = self.tree.min_weight_leaf;
        let best = best_split(
            self.data,
            idx,
            features,
            |i| self.grads[i],
            self.tree.min_samples_leaf,
            |l: &GradPair, r: &GradPair| {
                (l.h >= mwl && r.h >= mwl).then(|| -split_gain(l, r, self.lambda, self.gamma))
            },
        );
        match best {
            Some(c) if -c.cost > 0.0 => {
                let (li, ri) = partition(self.data, idx, c.feature, c.threshold);
                TreeNode::Split {
                    feature: c.feature,
                    threshold: c.threshold,
                    left: Box::new(self.grow(&li, depth + 1, features)),
                    right: Box::new(self.grow(&ri, depth + 1, features)),
                }
            }
            _ => leaf(),
        }
    }
}

fn base_log_odds(labels: &[u8]) -> f64 {
    let rate = labels.iter().filter(|&&y| y == 1).count() as f64 / labels.len() as f64;
    let r = rate.clamp(RATE_CLAMP, 1.0 - RATE_CLAMP);
    (r / (1.0 - r)).ln()
}

/// Second-order boosting of regression trees on the binomial log-loss.
pub fn gbt_fit(data: &FeatureMatrix, config: &GbtConfig) -> Result<GbtModel> {
    config.validate()?;
    if data.n_rows() == 0 {
        return Err(TreeError::Empty);
    }
    let base_score = config
        .base_score
        .unwrap_or_else(|| base_log_odds(data.labels()));
    let mut margins = vec![base_score; data.n_rows()];
    let idx: Vec<usize> = (0..data.n_rows()).collect();
    let features: Vec<usize> = (0..data.n_cols()).collect();
    let mut trees = Vec::with_capacity(config.n_rounds);
    for _ in 0..config.n_rounds {
        let grads: Vec<GradPair> = margins
            .iter()
            .zip(data.labels())
            .map(|(&f, &y)| {
                let p = sigmoid(f);
                GradPair {
                    g: p - f64::from(y),
                    h: p * (1.0 - p),
                }
            })
            .collect();
        let grower = GbtGrower {
            data,
            grads: &grads,
            tree: &config.tree,
            lambda: config.lambda,
            gamma: config.gamma,
        };
        let tree = grower.grow(&idx, 0, &features);
        for (m, row) in margins.iter_mut().zip(data.rows()) {
            *m += config.eta * tree.evaluate(row);
        }
        trees.push(tree);
    }
    Ok(GbtModel {
        trees,
        eta: config.eta,
        lambda: config.lambda,
        gamma: config.gamma,
        base_score,
    })
}

impl GbtModel {
    /// Raw margins `base_score + eta * sum of tree scores`.
    pub fn margins(&self, matrix: &FeatureMatrix) -> Result<Vec<f64>> {
        for t in &self.trees {
            t.check_width(matrix.n_cols())?;
        }
        Ok(matrix
            .rows()
            .map(|row| {
                self.base_score + self.eta * self.trees.iter().map(|t| t.evaluate(row)).sum::<f64>()
            })
            .collect())
    }

    pub fn write_flat(&self, w: &mut FlatWriter) {
        w.value("gbt", "v1");
        w.real("eta", self.eta);
        w.real("lambda", self.lambda);
        w.real("gamma", self.gamma);
        w.real("base_score", self.base_score);
        w.value("n_trees", self.trees.len());
        for t in &self.trees {
            t.write_flat(w);
        }
    }

    pub fn read_flat(r: &mut FlatReader<'_>) -> Result<Self> {
        let version = r.text("gbt")?;
        if version != "v1" {
            return Err(TreeError::Malformed(format!(
                "unsupported gbt version {version}"
            )));
        }
        let eta = r.parse("eta")?;
        let lambda = r.parse("lambda")?;
        let gamma = r.parse("gamma")?;
        let base_score = r.parse("base_score")?;
        let n: usize = r.parse("n_trees")?;
        let trees = (0..n)
            .map(|_| TreeNode::read_flat(r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            trees,
            eta,
            lambda,
            gamma,
            base_score,
        })
    }
}

pub fn gbt_predict(model: &GbtModel, matrix: &FeatureMatrix) -> Result<Prediction> {
    Ok(to_prediction(
        model.margins(matrix)?.into_iter().map(sigmoid).collect(),
    ))
}
