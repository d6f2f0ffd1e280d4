use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cart::CartGrower;
use super::{to_prediction, Result, TreeConfig, TreeError, TreeNode};
use crate::dataset::FeatureMatrix;
use crate::flatfile::{FlatReader, FlatWriter};
use crate::seed;
use crate::Prediction;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestConfig {
    pub n_trees: usize,
    /// Features drawn per node; `None` means `ceil(sqrt(F))`.
    pub m_try: Option<usize>,
    pub tree: TreeConfig,
    pub seed: u64,
    pub bootstrap: bool,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self {
            n_trees: 100,
            m_try: None,
            tree: TreeConfig::default(),
            seed: 0,
            bootstrap: true,
        }
    }
}

impl ForestConfig {
    /// Resolved `m_try` for `n_features` columns.
    pub fn m_try_for(&self, n_features: usize) -> usize {
        self.m_try
            .unwrap_or_else(|| (n_features as f64).sqrt().ceil() as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<TreeNode>,
    pub m_try: usize,
    pub n_trees: usize,
    pub seed: u64,
}

fn grow_one(data: &FeatureMatrix, config: &ForestConfig, m_try: usize, index: usize) -> TreeNode {
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(config.seed, "forest-tree", index as u64));
    let n = data.n_rows();
    let idx: Vec<usize> = if config.bootstrap {
        (0..n).map(|_| rng.gen_range(0..n)).collect()
    } else {
        (0..n).collect()
    };
    let ones = vec![1.0; n];
    let grower = CartGrower {
        data,
        weights: &ones,
        config: &config.tree,
    };
    let n_cols = data.n_cols();
    let mut draw = || {
        let mut cols = sample(&mut rng, n_cols, m_try).into_vec();
        cols.sort_unstable();
        cols
    };
    grower.grow(&idx, 0, &mut draw)
}

/// Bootstrap forest; each tree draws a fresh feature subset at every node.
/// Trees are grown in parallel from independent derived seeds.
pub fn forest_fit(data: &FeatureMatrix, config: &ForestConfig) -> Result<ForestModel> {
    config.tree.validate()?;
    if data.n_rows() == 0 {
        return Err(TreeError::Empty);
    }
    let m_try = config.m_try_for(data.n_cols());
    if config.n_trees == 0 || m_try == 0 || m_try > data.n_cols() {
        return Err(TreeError::Config(format!(
            "n_trees {} and m_try {m_try} with {} features",
            config.n_trees,
            data.n_cols()
        )));
    }
    let trees = (0..config.n_trees)
        .into_par_iter()
        .map(|t| grow_one(data, config, m_try, t))
        .collect();
    Ok(ForestModel {
        trees,
        m_try,
        n_trees: config.n_trees,
        seed: config.seed,
    })
}

/// Mean leaf probability over trees; label 1 iff the mean is at least 0.5.
pub fn forest_predict(model: &ForestModel, matrix: &FeatureMatrix) -> Result<Prediction> {
    if model.trees.is_empty() {
        return Err(TreeError::Malformed("forest has no trees".into()));
    }
    for t in &model.trees {
        t.check_width(matrix.n_cols())?;
    }
    let k = model.trees.len() as f64;
    let probs = matrix
        .rows()
        .map(|row| model.trees.iter().map(|t| t.evaluate(row)).sum::<f64>() / k)
        .collect();
    Ok(to_prediction(probs))
}

impl ForestModel {
    pub fn write_flat(&self, w: &mut FlatWriter) {
        w.value("forest", "v1");
        w.value("n_trees", self.n_trees);
        w.value("m_try", self.m_try);
        w.value("seed", self.seed);
        for t in &self.trees {
            t.write_flat(w);
        }
    }

    pub fn read_flat(r: &mut FlatReader<'_>) -> Result<Self> {
        let version = r.text("forest")?;
        if version != "v1" {
            return Err(TreeError::Malformed(format!(
                "unsupported forest version {version}"
            )));
        }
        let n_trees: usize = r.parse("n_trees")?;
        let m_try = r.parse("m_try")?;
        let seed = r.parse("seed")?;
        let trees = (0..n_trees)
            .map(|_| TreeNode::read_flat(r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            trees,
            m_try,
            n_trees,
            seed,
        })
    }
}
