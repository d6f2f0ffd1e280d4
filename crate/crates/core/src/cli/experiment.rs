use std::collections::BTreeMap;

use super::config::{ExperimentConfig, ModelEntry, ModelSpec};
use super::CliError;
use crate::boosting::{boost_fit, EnsembleModel, WeightVector};
use crate::dataset::{
    apply_standardize, fit_standardize, load_csv, split_indices, synthesize, Encoder, RawTable,
    Schema, SplitSpec, Synthetic,
};
use crate::flatfile::{FlatReader, FlatWriter, FormatError};
use crate::trees::{
    forest_fit, forest_predict, gbt_fit, gbt_predict, tree_fit, tree_predict, ForestModel,
    GbtModel, TreeNode,
};
use crate::{seed, FeatureMatrix, Prediction};

pub fn synth_seed(global: u64) -> u64 {
    seed::derive(global, "synth", 0)
}

pub fn split_seed(global: u64) -> u64 {
    seed::derive(global, "split", 0)
}

pub fn model_seed(global: u64, name: &str) -> u64 {
    seed::derive(global, &format!("model:{name}"), 0)
}

/// Generates the synthetic table a config's `[data.synth]` section describes.
pub fn synthesize_for(
    config: &crate::dataset::SynthConfig,
    global: u64,
) -> Result<Synthetic, CliError> {
    synthesize(config, synth_seed(global)).map_err(CliError::Data)
}

/// The raw table named by the config, before column selection.
pub fn load_source(config: &ExperimentConfig) -> Result<RawTable, CliError> {
    match (&config.data.path, &config.data.synth) {
        (Some(path), _) => load_csv(path, &Schema::advertising()).map_err(CliError::Data),
        (None, Some(synth)) => Ok(synthesize_for(synth, config.seed)?.table),
        (None, None) => Err(CliError::Config("no data source".into())),
    }
}

/// Standardized train and test matrices plus the seeds that produced them.
#[derive(Debug, Clone)]
pub struct PreparedData {
    pub train: FeatureMatrix,
    pub test: FeatureMatrix,
    /// Test cells holding categories unseen in the training rows.
    pub unseen_test_categories: usize,
    pub seeds: BTreeMap<String, u64>,
}

/// Selects columns, splits, then fits the encoder and scaler on the training
/// rows only and applies both to the test rows.
pub fn prepare(config: &ExperimentConfig) -> Result<PreparedData, CliError> {
    let table = load_source(config)?;
    let table = if config.columns.is_empty() {
        table
    } else {
        table.project(&config.columns).map_err(CliError::Data)?
    };
    let mut seeds = BTreeMap::new();
    if config.data.synth.is_some() && config.data.path.is_none() {
        seeds.insert("synth".to_string(), synth_seed(config.seed));
    }
    let spec = SplitSpec {
        train_fraction: config.split.train_fraction,
        seed: split_seed(config.seed),
        shuffle: config.split.shuffle,
    };
    seeds.insert("split".to_string(), spec.seed);
    let (train_idx, test_idx) = split_indices(table.n_rows(), &spec).map_err(CliError::Data)?;
    let (train_raw, test_raw) = (table.select(&train_idx), table.select(&test_idx));
    let encoder = Encoder::fit(&train_raw, &config.encoding).map_err(CliError::Data)?;
    let (train, _) = encoder.transform(&train_raw).map_err(CliError::Data)?;
    let (test, unseen) = encoder.transform(&test_raw).map_err(CliError::Data)?;
    let (train, scaler) = fit_standardize(&train).map_err(CliError::Data)?;
    let test = apply_standardize(&test, &scaler).map_err(CliError::Data)?;
    for m in &config.models {
        if matches!(m.spec, ModelSpec::Forest(_) | ModelSpec::LstmAdaboost(_)) {
            seeds.insert(
                format!("model:{}", m.name()),
                model_seed(config.seed, m.name()),
            );
        }
    }
    Ok(PreparedData {
        train,
        test,
        unseen_test_categories: unseen,
        seeds,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrainedModel {
    Tree(TreeNode),
    Forest(ForestModel),
    Gbt(GbtModel),
    LstmAdaboost(EnsembleModel),
}

impl TrainedModel {
    pub fn kind(&self) -> &'static str {
        match self {
            TrainedModel::Tree(_) => "tree",
            TrainedModel::Forest(_) => "forest",
            TrainedModel::Gbt(_) => "gbt",
            TrainedModel::LstmAdaboost(_) => "lstm_adaboost",
        }
    }

    pub fn predict(&self, matrix: &FeatureMatrix) -> Result<Prediction, String> {
        match self {
            TrainedModel::Tree(t) => tree_predict(t, matrix).map_err(|e| e.to_string()),
            TrainedModel::Forest(f) => forest_predict(f, matrix).map_err(|e| e.to_string()),
            TrainedModel::Gbt(g) => gbt_predict(g, matrix).map_err(|e| e.to_string()),
            TrainedModel::LstmAdaboost(e) => e.predict(matrix).map_err(|e| e.to_string()),
        }
    }
}

/// Fits one configured model; stochastic models get the seed derived from
/// the global seed and the model name.
pub fn train_model(
    entry: &ModelEntry,
    global_seed: u64,
    train: &FeatureMatrix,
) -> Result<TrainedModel, CliError> {
    let name = entry.name();
    let seed = model_seed(global_seed, name);
    let failed = |message: String| CliError::Training {
        model: name.to_string(),
        message,
    };
    match &entry.spec {
        ModelSpec::Tree(cfg) => {
            let w = WeightVector::uniform(train.n_rows()).map_err(|e| failed(e.to_string()))?;
            tree_fit(train, &w, cfg)
                .map(TrainedModel::Tree)
                .map_err(|e| failed(e.to_string()))
        }
        ModelSpec::Forest(cfg) => {
            let cfg = crate::trees::ForestConfig {
                seed,
                ..cfg.clone()
            };
            forest_fit(train, &cfg)
                .map(TrainedModel::Forest)
                .map_err(|e| failed(e.to_string()))
        }
        ModelSpec::Gbt(cfg) => gbt_fit(train, cfg)
            .map(TrainedModel::Gbt)
            .map_err(|e| failed(e.to_string())),
        ModelSpec::LstmAdaboost(cfg) => {
            let cfg = crate::boosting::BoostConfig {
                seed,
                ..cfg.clone()
            };
            boost_fit(&cfg, train)
                .map(TrainedModel::LstmAdaboost)
                .map_err(|e| failed(e.to_string()))
        }
    }
}

/// A trained model with its name and the fingerprint of the preprocessing
/// it was trained under, as stored in a model file.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelArtifact {
    pub name: String,
    pub fingerprint: String,
    pub model: TrainedModel,
}

impl ModelArtifact {
    pub fn to_text(&self) -> String {
        let mut w = FlatWriter::new();
        w.value("artifact", "v1");
        w.value("name", &self.name);
        w.value("kind", self.model.kind());
        w.value("fingerprint", &self.fingerprint);
        match &self.model {
            TrainedModel::Tree(t) => t.write_flat(&mut w),
            TrainedModel::Forest(f) => f.write_flat(&mut w),
            TrainedModel::Gbt(g) => g.write_flat(&mut w),
            TrainedModel::LstmAdaboost(e) => e.write_flat(&mut w),
        }
        w.finish()
    }

    pub fn from_text(text: &str) -> Result<Self, String> {
        let mut r = FlatReader::new(text);
        let fmt = |e: FormatError| e.to_string();
        let version = r.text("artifact").map_err(fmt)?;
        if version != "v1" {
            return Err(format!("unsupported artifact version {version}"));
        }
        let name = r.text("name").map_err(fmt)?;
        let kind = r.text("kind").map_err(fmt)?;
        let fingerprint = r.text("fingerprint").map_err(fmt)?;
        let model = match kind.as_str() {
            "tree" => TrainedModel::Tree(TreeNode::read_flat(&mut r).map_err(|e| e.to_string())?),
            "forest" => {
                TrainedModel::Forest(ForestModel::read_flat(&mut r).map_err(|e| e.to_string())?)
            }
            "gbt" => TrainedModel::Gbt(GbtModel::read_flat(&mut r).map_err(|e| e.to_string())?),
            "lstm_adaboost" => TrainedModel::LstmAdaboost(
                EnsembleModel::read_flat(&mut r).map_err(|e| e.to_string())?,
            ),
            other => return Err(format!("unknown model kind `{other}`")),
        };
        if !r.is_done() {
            return Err(format!("trailing content at line {}", r.line_no()));
        }
        Ok(Self {
            name,
            fingerprint,
            model,
        })
    }
}
