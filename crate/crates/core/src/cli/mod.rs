//! The `clickboost` command-line experiment runner.
//!
//! Exit codes: 0 success, 2 data or usage error, 3 training failure,
//! 4 preprocessing fingerprint mismatch, 5 conflicting reports.

mod config;
mod experiment;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::dataset::{summarize, write_csv, DataError, Schema, SynthConfig};
use crate::eval::{compare, confusion, EvalError, ModelReport};

pub use config::{DataSource, ExperimentConfig, ModelEntry, ModelSpec, SplitConfig};
pub use experiment::{
    load_source, model_seed, prepare, split_seed, synth_seed, synthesize_for, train_model,
    ModelArtifact, PreparedData, TrainedModel,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Data(DataError),
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("training `{model}` failed: {message}")]
    Training { model: String, message: String },
    #[error("model `{model}` was trained under preprocessing {expected}, data has {found}")]
    Fingerprint {
        model: String,
        expected: String,
        found: String,
    },
    #[error("report conflict: {0}")]
    Conflict(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Data(_) | CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Training { .. } => 3,
            CliError::Fingerprint { .. } => 4,
            CliError::Conflict(_) => 5,
        }
    }
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(
    name = "clickboost",
    version,
    about = "Ad-click prediction experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment config (TOML) or a run manifest (JSON) to replay.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config's global seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; overrides the config's `out_dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// What to print on stdout; files are always written in both forms.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Descriptive statistics of a dataset.
    Stats {
        /// CSV in the advertising schema; defaults to the config's data source.
        data: Option<PathBuf>,
    },
    /// Train every model listed in the config.
    Train,
    /// Train and test metrics for trained model files.
    Evaluate {
        /// Model files; defaults to `<out>/models/<name>.model` per config entry.
        models: Vec<PathBuf>,
    },
    /// Side-by-side comparison of evaluation reports.
    Compare {
        #[arg(required = true, num_args = 2..)]
        reports: Vec<PathBuf>,
    },
    /// Write a synthetic dataset with a known labeling rule.
    Synth {
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        noise: Option<f64>,
        #[arg(long)]
        balance: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to rerun a training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub command: String,
    pub config: ExperimentConfig,
    pub seeds: BTreeMap<String, u64>,
    pub fingerprint: String,
    pub train_rows: usize,
    pub test_rows: usize,
    pub artifacts: Vec<Artifact>,
    /// Wall-clock seconds per step.
    pub timings: BTreeMap<String, f64>,
}

/// Parses `std::env::args` and runs; returns the process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli) {
        Ok(stdout) => {
            print!("{stdout}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Stats { data } => cmd_stats(cli, data.as_deref()),
        Command::Train => cmd_train(cli),
        Command::Evaluate { models } => cmd_evaluate(cli, models),
        Command::Compare { reports } => cmd_compare(cli, reports),
        Command::Synth {
            rows,
            noise,
            balance,
        } => cmd_synth(cli, *rows, *noise, *balance),
    }
}

/// Writes through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents).map_err(|e| io_error(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io_error(path, e))
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config("this command needs --config".into()))?;
    let mut config = ExperimentConfig::load(path)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    config.validate()?;
    Ok(config)
}

fn out_dir(cli: &Cli, config: Option<&ExperimentConfig>) -> Result<PathBuf, CliError> {
    cli.out
        .clone()
        .or_else(|| config.and_then(|c| c.out_dir.clone()))
        .ok_or_else(|| CliError::Config("no output directory: pass --out or set `out_dir`".into()))
}

fn model_path(out: &Path, name: &str) -> PathBuf {
    out.join("models").join(format!("{name}.model"))
}

fn report_path(out: &Path, name: &str) -> PathBuf {
    out.join("reports").join(format!("{name}.json"))
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn cmd_stats(cli: &Cli, data: Option<&Path>) -> Result<String, CliError> {
    let config = match (data, &cli.config) {
        (Some(_), None) => None,
        _ => Some(load_config(cli)?),
    };
    let table = match data {
        Some(path) => {
            crate::dataset::load_csv(path, &Schema::advertising()).map_err(CliError::Data)?
        }
        None => load_source(config.as_ref().expect("config loaded"))?,
    };
    let stats = summarize(&table).map_err(CliError::Data)?;
    let out = out_dir(cli, config.as_ref())?;
    let (json, text) = (stats.to_json(), stats.to_text());
    write_atomic(&out.join("stats.json"), json.as_bytes())?;
    write_atomic(&out.join("stats.txt"), text.as_bytes())?;
    Ok(match cli.format {
        Format::Text => text,
        Format::Structured => json,
    })
}

fn cmd_train(cli: &Cli) -> Result<String, CliError> {
    let mut config = load_config(cli)?;
    let out = out_dir(cli, Some(&config))?;
    if let Some(p) = &config.data.path {
        config.data.path = Some(fs::canonicalize(p).map_err(|e| io_error(p, e))?);
    }
    let mut timings = BTreeMap::new();
    let start = Instant::now();
    let data = prepare(&config)?;
    timings.insert("prepare".to_string(), start.elapsed().as_secs_f64());
    let fingerprint = data.train.fingerprint();

    let mut artifacts = Vec::new();
    let mut summary = Vec::new();
    for entry in &config.models {
        let start = Instant::now();
        let model = train_model(entry, config.seed, &data.train)?;
        timings.insert(
            format!("train:{}", entry.name()),
            start.elapsed().as_secs_f64(),
        );
        if let TrainedModel::LstmAdaboost(e) = &model {
            summary.push(format!("{}: {} rounds", entry.name(), e.rounds.len()));
        } else {
            summary.push(format!("{}: trained", entry.name()));
        }
        let artifact = ModelArtifact {
            name: entry.name().to_string(),
            fingerprint: fingerprint.clone(),
            model,
        };
        let text = artifact.to_text();
        let path = model_path(&out, entry.name());
        write_atomic(&path, text.as_bytes())?;
        artifacts.push(Artifact {
            path: format!("models/{}.model", entry.name()),
            sha256: sha256_hex(text.as_bytes()),
        });
    }

    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: "train".into(),
        config: ExperimentConfig {
            out_dir: Some(out.clone()),
            ..config
        },
        seeds: data.seeds,
        fingerprint,
        train_rows: data.train.n_rows(),
        test_rows: data.test.n_rows(),
        artifacts,
        timings,
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    write_atomic(&out.join("manifest.json"), json.as_bytes())?;
    Ok(match cli.format {
        Format::Text => {
            let mut s = summary.join("\n");
            s.push_str(&format!(
                "\nmanifest: {}\n",
                out.join("manifest.json").display()
            ));
            s
        }
        Format::Structured => json,
    })
}

fn eval_error(e: EvalError) -> CliError {
    match e {
        EvalError::DuplicateModel(name) => {
            CliError::Conflict(format!("duplicate model name `{name}`"))
        }
        other => CliError::Config(other.to_string()),
    }
}

fn evaluate_artifact(
    artifact: &ModelArtifact,
    data: &PreparedData,
) -> Result<ModelReport, CliError> {
    let found = data.train.fingerprint();
    if artifact.fingerprint != found {
        return Err(CliError::Fingerprint {
            model: artifact.name.clone(),
            expected: artifact.fingerprint.clone(),
            found,
        });
    }
    let cm = |m: &crate::FeatureMatrix| -> Result<_, CliError> {
        let pred = artifact
            .model
            .predict(m)
            .map_err(|message| CliError::Training {
                model: artifact.name.clone(),
                message,
            })?;
        confusion(&pred.labels, m.labels()).map_err(eval_error)
    };
    ModelReport::from_confusion(artifact.name.clone(), cm(&data.train)?, cm(&data.test)?)
        .map_err(eval_error)
}

fn cmd_evaluate(cli: &Cli, models: &[PathBuf]) -> Result<String, CliError> {
    let config = load_config(cli)?;
    let out = out_dir(cli, Some(&config))?;
    let paths: Vec<PathBuf> = if models.is_empty() {
        config
            .models
            .iter()
            .map(|m| model_path(&out, m.name()))
            .collect()
    } else {
        models.to_vec()
    };
    let data = prepare(&config)?;
    let mut reports = Vec::new();
    for path in &paths {
        let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        let artifact = ModelArtifact::from_text(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let report = evaluate_artifact(&artifact, &data)?;
        write_atomic(
            &report_path(&out, &report.model),
            (report.to_json() + "\n").as_bytes(),
        )?;
        write_atomic(
            &out.join("reports").join(format!("{}.txt", report.model)),
            report.to_text().as_bytes(),
        )?;
        reports.push(report);
    }
    Ok(match cli.format {
        Format::Text => reports
            .iter()
            .map(|r| r.to_text())
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Structured => {
            serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n"
        }
    })
}

fn cmd_compare(cli: &Cli, paths: &[PathBuf]) -> Result<String, CliError> {
    let mut reports = Vec::new();
    for path in paths {
        let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        let report: ModelReport = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        reports.push(report);
    }
    let cmp = compare(&reports).map_err(eval_error)?;
    let out = out_dir(cli, None)?;
    let (json, text) = (cmp.to_json() + "\n", cmp.to_text());
    write_atomic(&out.join("comparison.json"), json.as_bytes())?;
    write_atomic(&out.join("comparison.txt"), text.as_bytes())?;
    write_atomic(&out.join("chart.csv"), cmp.chart_csv().as_bytes())?;
    Ok(match cli.format {
        Format::Text => text,
        Format::Structured => json,
    })
}

/// Sidecar of a synthetic CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSidecar {
    pub seed: u64,
    /// Seed actually passed to the generator.
    pub generator_seed: u64,
    pub config: SynthConfig,
    pub bayes_accuracy: f64,
    pub rule: crate::dataset::GeneratingRule,
}

fn cmd_synth(
    cli: &Cli,
    rows: Option<usize>,
    noise: Option<f64>,
    balance: Option<f64>,
) -> Result<String, CliError> {
    let config = cli.config.as_ref().map(|_| load_config(cli)).transpose()?;
    let mut synth = config
        .as_ref()
        .and_then(|c| c.data.synth.clone())
        .unwrap_or_default();
    if let Some(n) = rows {
        synth.n_rows = n;
    }
    if let Some(x) = noise {
        synth.noise = x;
    }
    if let Some(b) = balance {
        synth.balance = b;
    }
    let seed = cli.seed.or(config.as_ref().map(|c| c.seed)).unwrap_or(0);
    let out = out_dir(cli, config.as_ref())?;
    let generated = synthesize_for(&synth, seed)?;
    let csv_path = out.join("synthetic.csv");
    let mut tmp = csv_path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::create_dir_all(&out).map_err(|e| io_error(&out, e))?;
    write_csv(&generated.table, &tmp).map_err(CliError::Data)?;
    fs::rename(&tmp, &csv_path).map_err(|e| io_error(&csv_path, e))?;
    let sidecar = SynthSidecar {
        seed,
        generator_seed: synth_seed(seed),
        config: synth,
        bayes_accuracy: generated.rule.bayes_accuracy,
        rule: generated.rule,
    };
    let json = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes") + "\n";
    write_atomic(&out.join("synthetic.rule.json"), json.as_bytes())?;
    Ok(match cli.format {
        Format::Text => format!(
            "wrote {} rows to {}\nrule: {}\nBayes accuracy: {}\n",
            generated.table.n_rows(),
            csv_path.display(),
            sidecar.rule.description,
            sidecar.bayes_accuracy
        ),
        Format::Structured => json,
    })
}
