use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{CliError, RunManifest};
use crate::boosting::BoostConfig;
use crate::dataset::{EncodingConfig, SynthConfig, QUANTITATIVE_COLUMNS};
use crate::trees::{ForestConfig, GbtConfig, TreeConfig};

/// A complete experiment: data source, preprocessing, split and models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Global seed; every other seed is derived from it.
    #[serde(default)]
    pub seed: u64,
    pub data: DataSource,
    /// Input columns kept before encoding; empty keeps every column.
    #[serde(default = "default_columns")]
    pub columns: Vec<String>,
    #[serde(default)]
    pub encoding: EncodingConfig,
    #[serde(default)]
    pub split: SplitConfig,
    pub models: Vec<ModelEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

fn default_columns() -> Vec<String> {
    QUANTITATIVE_COLUMNS.iter().map(|s| s.to_string()).collect()
}

/// Exactly one of `path` and `synth`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSource {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synth: Option<SynthConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitConfig {
    pub train_fraction: f64,
    pub shuffle: bool,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self {
            train_fraction: 0.7,
            shuffle: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelEntry {
    /// Defaults to the kind; used for file names and report rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub spec: ModelSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    Tree(TreeConfig),
    Forest(ForestConfig),
    Gbt(GbtConfig),
    LstmAdaboost(BoostConfig),
}

impl ModelSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelSpec::Tree(_) => "tree",
            ModelSpec::Forest(_) => "forest",
            ModelSpec::Gbt(_) => "gbt",
            ModelSpec::LstmAdaboost(_) => "lstm_adaboost",
        }
    }
}

impl ModelEntry {
    pub fn new(spec: ModelSpec) -> Self {
        Self { name: None, spec }
    }

    pub fn name(&self) -> &str {
        self.name.as_deref().unwrap_or(self.spec.kind())
    }
}

impl ExperimentConfig {
    /// The four-model comparison on the given data with default hyperparameters.
    pub fn standard(data: DataSource, seed: u64) -> Self {
        Self {
            seed,
            data,
            columns: default_columns(),
            encoding: EncodingConfig::default(),
            split: SplitConfig::default(),
            models: vec![
                ModelEntry::new(ModelSpec::Tree(TreeConfig::default())),
                ModelEntry::new(ModelSpec::Forest(ForestConfig::default())),
                ModelEntry::new(ModelSpec::Gbt(GbtConfig::default())),
                ModelEntry::new(ModelSpec::LstmAdaboost(BoostConfig::default())),
            ],
            out_dir: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Reads a TOML config, or the config snapshot of a `.json` run manifest.
    /// A relative data path is resolved against the file's directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let mut config = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str::<RunManifest>(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
                .config
        } else {
            Self::from_toml(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        };
        if let Some(p) = &config.data.path {
            if p.is_relative() {
                let base = path.parent().unwrap_or(Path::new("."));
                config.data.path = Some(base.join(p));
            }
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        match (&self.data.path, &self.data.synth) {
            (Some(p), None) => {
                if !p.is_file() {
                    return Err(CliError::Config(format!(
                        "data file {} not found",
                        p.display()
                    )));
                }
            }
            (None, Some(_)) => {}
            _ => {
                return Err(CliError::Config(
                    "data needs exactly one of `path` or `synth`".into(),
                ))
            }
        }
        if self.models.is_empty() {
            return Err(CliError::Config("model list is empty".into()));
        }
        let mut seen = BTreeSet::new();
        for m in &self.models {
            let name = m.name();
            let valid = !name.is_empty()
                && name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c));
            if !valid {
                return Err(CliError::Config(format!(
                    "model name `{name}` must be nonempty ASCII letters, digits, `_`, `-` or `.`"
                )));
            }
            if !seen.insert(name) {
                return Err(CliError::Config(format!("duplicate model name `{name}`")));
            }
        }
        if !(self.split.train_fraction > 0.0 && self.split.train_fraction < 1.0) {
            return Err(CliError::Config(format!(
                "train_fraction {} outside (0, 1)",
                self.split.train_fraction
            )));
        }
        Ok(())
    }
}
