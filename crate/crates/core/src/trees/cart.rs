use super::split::{best_split, partition, NodeStats};
use super::{to_prediction, Result, TreeConfig, TreeError, TreeNode};
use crate::boosting::WeightVector;
use crate::dataset::FeatureMatrix;
use crate::Prediction;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct ClassMass {
    pub w0: f64,
    pub w1: f64,
}

impl NodeStats for ClassMass {
    fn add(&mut self, other: &Self) {
        self.w0 += other.w0;
        self.w1 += other.w1;
    }
}

impl ClassMass {
    fn total(&self) -> f64 {
        self.w0 + self.w1
    }

    pub(crate) fn gini(&self) -> f64 {
        let w = self.total();
        if w <= 0.0 {
            return 0.0;
        }
        let (p0, p1) = (self.w0 / w, self.w1 / w);
        1.0 - p0 * p0 - p1 * p1
    }
}

/// Weighted Gini of a split: `sum_side (W_side / W_node) * gini(side)`.
pub(crate) fn split_impurity(left: &ClassMass, right: &ClassMass) -> f64 {
    let w = left.total() + right.total();
    if w <= 0.0 {
        return 0.0;
    }
    left.total() / w * left.gini() + right.total() / w * right.gini()
}

/// Minimum strict improvement over the parent impurity for a split to count.
const MIN_GAIN: f64 = 1e-12;

pub(crate) struct CartGrower<'a> {
    pub data: &'a FeatureMatrix,
    /// Weight of each row of `data`; an index listed twice counts twice.
    pub weights: &'a [f64],
    pub config: &'a TreeConfig,
}

impl CartGrower<'_> {
    fn mass(&self, i: usize) -> ClassMass {
        let w = self.weights[i];
        if self.data.labels()[i] == 1 {
            ClassMass { w0: 0.0, w1: w }
        } else {
            ClassMass { w0: w, w1: 0.0 }
        }
    }

    fn leaf(&self, idx: &[usize], mass: &ClassMass) -> TreeNode {
        if mass.total() > 0.0 {
            TreeNode::leaf(mass.w1 / mass.total())
        } else {
            let pos = idx.iter().filter(|&&i| self.data.labels()[i] == 1).count();
            TreeNode::leaf(pos as f64 / idx.len() as f64)
        }
    }

    /// Grows a subtree over `idx`; `features` is asked for the candidate
    /// columns at each node that attempts a split.
    pub fn grow(
        &self,
        idx: &[usize],
        depth: usize,
        features: &mut dyn FnMut() -> Vec<usize>,
    ) -> TreeNode {
        let mut mass = ClassMass::default();
        for &i in idx {
            mass.add(&self.mass(i));
        }
        let pure = mass.w0 == 0.0 || mass.w1 == 0.0;
        if depth >= self.config.max_depth || pure || idx.len() < 2 * self.config.min_samples_leaf {
            return self.leaf(idx, &mass);
        }
        let cols = features();
        let mwl = self.config.min_weight_leaf;
        let best = best_split(
            self.data,
            idx,
            &cols,
            |i| self.mass(i),
            self.config.min_samples_leaf,
            |l: &ClassMass, r: &ClassMass| {
                (l.total() >= mwl && r.total() >= mwl).then(|| split_impurity(l, r))
            },
        );
        match best {
            Some(c) if c.cost < mass.gini() - MIN_GAIN => {
                let (li, ri) = partition(self.data, idx, c.feature, c.threshold);
                TreeNode::Split {
                    feature: c.feature,
                    threshold: c.threshold,
                    left: Box::new(self.grow(&li, depth + 1, features)),
                    right: Box::new(self.grow(&ri, depth + 1, features)),
                }
            }
            _ => self.leaf(idx, &mass),
        }
    }
}

/// Greedy weighted-Gini CART. Leaves hold the weighted class-1 proportion.
pub fn tree_fit(
    data: &FeatureMatrix,
    weights: &WeightVector,
    config: &TreeConfig,
) -> Result<TreeNode> {
    config.validate()?;
    if data.n_rows() == 0 {
        return Err(TreeError::Empty);
    }
    if weights.len() != data.n_rows() {
        return Err(TreeError::Weights(format!(
            "{} weights for {} rows",
            weights.len(),
            data.n_rows()
        )));
    }
    let grower = CartGrower {
        data,
        weights: weights.as_slice(),
        config,
    };
    let idx: Vec<usize> = (0..data.n_rows()).collect();
    let all: Vec<usize> = (0..data.n_cols()).collect();
    Ok(grower.grow(&idx, 0, &mut || all.clone()))
}

pub fn tree_predict(root: &TreeNode, matrix: &FeatureMatrix) -> Result<Prediction> {
    Ok(to_prediction(root.predict_raw(matrix)?))
}
