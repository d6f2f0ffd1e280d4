//! Tree-family learners: weighted CART, random forest and second-order
//! gradient-boosted trees.

mod cart;
mod forest;
mod gbt;
mod split;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::FeatureMatrix;
use crate::flatfile::{parse_token, FlatReader, FlatWriter, FormatError};
use crate::Prediction;

pub use cart::{tree_fit, tree_predict};
pub use forest::{forest_fit, forest_predict, ForestConfig, ForestModel};
pub use gbt::{gbt_fit, gbt_predict, GbtConfig, GbtModel};

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("empty training set")]
    Empty,
    #[error("invalid weights: {0}")]
    Weights(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("tree splits on feature {feature} but matrix has {n_cols} columns")]
    FeatureOutOfRange { feature: usize, n_cols: usize },
    #[error("malformed tree: {0}")]
    Malformed(String),
    #[error(transparent)]
    Format(#[from] FormatError),
}

pub type Result<T> = std::result::Result<T, TreeError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TreeConfig {
    /// Root is depth 0; a `max_depth` of 0 grows a single leaf.
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    /// Minimum child mass: sample weight for CART, hessian sum for GBT.
    pub min_weight_leaf: f64,
}

impl Default for TreeConfig {
    fn default() -> Self {
        Self {
            max_depth: 6,
            min_samples_leaf: 5,
            min_weight_leaf: 0.0,
        }
    }
}

impl TreeConfig {
    pub(crate) fn validate(&self) -> Result<()> {
        if self.min_samples_leaf == 0 || self.min_weight_leaf.is_nan() || self.min_weight_leaf < 0.0
        {
            return Err(TreeError::Config(format!("{self:?}")));
        }
        Ok(())
    }
}

/// Binary tree; rows with `x[feature] <= threshold` go left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Leaf {
        value: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    pub fn leaf(value: f64) -> Self {
        TreeNode::Leaf { value }
    }

    pub fn evaluate(&self, row: &[f64]) -> f64 {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { value } => return *value,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature] <= *threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }

    pub fn max_feature(&self) -> Option<usize> {
        match self {
            TreeNode::Leaf { .. } => None,
            TreeNode::Split {
                feature,
                left,
                right,
                ..
            } => Some(
                [Some(*feature), left.max_feature(), right.max_feature()]
                    .into_iter()
                    .flatten()
                    .max()
                    .unwrap(),
            ),
        }
    }

    pub(crate) fn check_width(&self, n_cols: usize) -> Result<()> {
        match self.max_feature() {
            Some(feature) if feature >= n_cols => {
                Err(TreeError::FeatureOutOfRange { feature, n_cols })
            }
            _ => Ok(()),
        }
    }

    pub(crate) fn predict_raw(&self, matrix: &FeatureMatrix) -> Result<Vec<f64>> {
        self.check_width(matrix.n_cols())?;
        Ok(matrix.rows().map(|r| self.evaluate(r)).collect())
    }

    /// Preorder listing: `node S <feature> <threshold>` or `node L <value>`.
    pub fn write_flat(&self, w: &mut FlatWriter) {
        w.value("nodes", self.count_nodes());
        self.write_nodes(w);
    }

    fn count_nodes(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => 1 + left.count_nodes() + right.count_nodes(),
        }
    }

    fn write_nodes(&self, w: &mut FlatWriter) {
        match self {
            TreeNode::Leaf { value } => {
                w.line("node", [String::from("L"), format!("{value:?}")]);
            }
            TreeNode::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                w.line(
                    "node",
                    [
                        String::from("S"),
                        feature.to_string(),
                        format!("{threshold:?}"),
                    ],
                );
                left.write_nodes(w);
                right.write_nodes(w);
            }
        }
    }

    pub fn read_flat(r: &mut FlatReader<'_>) -> Result<Self> {
        let declared: usize = r.parse("nodes")?;
        let mut remaining = declared;
        let root = Self::read_node(r, &mut remaining)?;
        if remaining != 0 {
            return Err(TreeError::Malformed(format!(
                "{declared} nodes declared, {} read",
                declared - remaining
            )));
        }
        Ok(root)
    }

    fn read_node(r: &mut FlatReader<'_>, remaining: &mut usize) -> Result<Self> {
        if *remaining == 0 {
            return Err(TreeError::Malformed("dangling child".into()));
        }
        *remaining -= 1;
        let line = r.line_no() + 1;
        let toks = r.tokens("node").map_err(|e| match e {
            FormatError::Eof { .. } => TreeError::Malformed("dangling child".into()),
            other => TreeError::Format(other),
        })?;
        match toks.as_slice() {
            ["L", v] => Ok(TreeNode::leaf(parse_token(line, "node", v)?)),
            ["S", f, t] => {
                let feature = parse_token(line, "node", f)?;
                let threshold = parse_token(line, "node", t)?;
                let left = Box::new(Self::read_node(r, remaining)?);
                let right = Box::new(Self::read_node(r, remaining)?);
                Ok(TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                })
            }
            _ => Err(TreeError::Malformed(format!(
                "line {line}: bad node record"
            ))),
        }
    }
}

pub(crate) fn to_prediction(probs: Vec<f64>) -> Prediction {
    Prediction::from_probabilities(probs)
}
