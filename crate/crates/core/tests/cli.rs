use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use clickboost::dataset::{encode, load_csv, EncodingConfig, Schema, StatsSummary};
use clickboost::eval::ModelReport;
use clickboost::trees::{tree_fit, TreeConfig};
use clickboost::WeightVector;

fn clickboost(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clickboost"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const SMALL: &str = r#"
seed = 4

[data.synth]
n_rows = 400
noise = 0.1

[[models]]
kind = "tree"

[[models]]
kind = "forest"
n_trees = 10

[[models]]
kind = "gbt"
n_rounds = 20

[[models]]
kind = "lstm_adaboost"
n_rounds = 3

[models.lstm]
epochs = 20
"#;

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn read_report(path: &Path) -> ModelReport {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const MODELS: [&str; 4] = ["tree", "forest", "gbt", "lstm_adaboost"];

#[test]
fn train_evaluate_compare_pipeline() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(dir, "exp.toml", SMALL);

    let out = clickboost(dir, &["train", "--config", "exp.toml", "--out", "a"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    for m in MODELS {
        assert!(dir.join(format!("a/models/{m}.model")).is_file());
    }
    assert!(dir.join("a/manifest.json").is_file());
    assert!(!dir.join("a/manifest.json.tmp").exists());

    // Rerun with the same config and seed.
    let out = clickboost(dir, &["train", "--config", "exp.toml", "--out", "b"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    // Replay from the manifest alone.
    let out = clickboost(dir, &["train", "--config", "a/manifest.json", "--out", "c"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    for m in MODELS {
        let a = fs::read(dir.join(format!("a/models/{m}.model"))).unwrap();
        assert_eq!(
            a,
            fs::read(dir.join(format!("b/models/{m}.model"))).unwrap(),
            "{m} rerun"
        );
        assert_eq!(
            a,
            fs::read(dir.join(format!("c/models/{m}.model"))).unwrap(),
            "{m} replay"
        );
    }

    for run in ["a", "b"] {
        let out = clickboost(
            dir,
            &[
                "evaluate",
                "--config",
                "exp.toml",
                "--out",
                run,
                "--format",
                "structured",
            ],
        );
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let printed: Vec<ModelReport> = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(printed.len(), 4);
    }
    for m in MODELS {
        for ext in ["json", "txt"] {
            let a = fs::read(dir.join(format!("a/reports/{m}.{ext}"))).unwrap();
            assert_eq!(
                a,
                fs::read(dir.join(format!("b/reports/{m}.{ext}"))).unwrap()
            );
        }
        let r = read_report(&dir.join(format!("a/reports/{m}.json")));
        assert_eq!(r.train_confusion.total() + r.test_confusion.total(), 400);
        assert_eq!(r.test_confusion.total(), 120);
    }

    // A different seed changes the split, hence the scaler fingerprint.
    let out = clickboost(
        dir,
        &[
            "evaluate", "--config", "exp.toml", "--out", "a", "--seed", "5",
        ],
    );
    assert_eq!(code(&out), 4, "{}", stderr(&out));

    let reports: Vec<String> = ["tree", "forest", "gbt"]
        .iter()
        .map(|m| format!("a/reports/{m}.json"))
        .collect();
    let mut args = vec!["compare", "--out", "cmp"];
    args.extend(reports.iter().map(String::as_str));
    let out = clickboost(dir, &args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let chart = fs::read_to_string(dir.join("cmp/chart.csv")).unwrap();
    let mut lines = chart.lines();
    assert_eq!(lines.next(), Some("model,partition,metric,value"));
    assert_eq!(lines.count(), 3 * 2 * 4);
    let again = clickboost(dir, &args);
    assert_eq!(again.stdout, out.stdout);
    for f in ["chart.csv", "comparison.json", "comparison.txt"] {
        assert!(dir.join("cmp").join(f).is_file());
    }

    let out = clickboost(
        dir,
        &[
            "compare",
            "--out",
            "dup",
            "a/reports/tree.json",
            "a/reports/tree.json",
        ],
    );
    assert_eq!(code(&out), 5, "{}", stderr(&out));
    let out = clickboost(dir, &["compare", "--out", "one", "a/reports/tree.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn self_comparison_under_two_names() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(
        dir,
        "exp.toml",
        "seed = 2\n[data.synth]\nn_rows = 200\nnoise = 0.1\n[[models]]\nkind = \"tree\"\n",
    );
    assert_eq!(
        code(&clickboost(
            dir,
            &["train", "--config", "exp.toml", "--out", "r"]
        )),
        0
    );
    assert_eq!(
        code(&clickboost(
            dir,
            &["evaluate", "--config", "exp.toml", "--out", "r"]
        )),
        0
    );
    let mut twin = read_report(&dir.join("r/reports/tree.json"));
    twin.model = "tree_copy".into();
    write(dir, "twin.json", &twin.to_json());
    let out = clickboost(
        dir,
        &[
            "compare",
            "--out",
            "c",
            "r/reports/tree.json",
            "twin.json",
            "--format",
            "structured",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let cmp: clickboost::eval::ComparisonReport = serde_json::from_slice(&out.stdout).unwrap();
    let (a, b) = (&cmp.rows[0], &cmp.rows[1]);
    assert_eq!((&a.train, &a.test), (&b.train, &b.test));
    assert_eq!(a.generalization_gap - b.generalization_gap, 0.0);
    assert_eq!(a.margin, Some(0.0));
}

#[test]
fn training_failure_names_the_model() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(
        dir,
        "exp.toml",
        "[data.synth]\nn_rows = 100\nnoise = 0.1\n[[models]]\nkind = \"forest\"\nname = \"wide_forest\"\nm_try = 99\n",
    );
    let out = clickboost(dir, &["train", "--config", "exp.toml", "--out", "r"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("wide_forest"), "{}", stderr(&out));
    assert!(!dir.join("r/manifest.json").exists());
}

#[test]
fn config_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(
        dir,
        "missing.toml",
        "[data]\npath = \"nope.csv\"\n[[models]]\nkind = \"tree\"\n",
    );
    assert_eq!(
        code(&clickboost(
            dir,
            &["train", "--config", "missing.toml", "--out", "r"]
        )),
        2
    );
    write(
        dir,
        "nomodels.toml",
        "models = []\n[data.synth]\nn_rows = 100\nnoise = 0.1\n",
    );
    assert_eq!(
        code(&clickboost(
            dir,
            &["train", "--config", "nomodels.toml", "--out", "r"]
        )),
        2
    );
    assert_eq!(code(&clickboost(dir, &["train", "--out", "r"])), 2);
}

#[test]
fn synth_writes_csv_and_sidecar_deterministically() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    for out in ["s1", "s2"] {
        let o = clickboost(
            dir,
            &[
                "synth", "--rows", "1000", "--noise", "0.1", "--seed", "9", "--out", out,
            ],
        );
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    let csv = fs::read(dir.join("s1/synthetic.csv")).unwrap();
    assert_eq!(csv, fs::read(dir.join("s2/synthetic.csv")).unwrap());
    let table = load_csv(dir.join("s1/synthetic.csv"), &Schema::advertising()).unwrap();
    assert_eq!(table.n_rows(), 1000);
    let sidecar: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("s1/synthetic.rule.json")).unwrap())
            .unwrap();
    assert!((sidecar["bayes_accuracy"].as_f64().unwrap() - 0.9).abs() < 1e-12);
    assert!(sidecar["rule"]["description"]
        .as_str()
        .unwrap()
        .contains("flipped"));

    let o = clickboost(
        dir,
        &[
            "synth", "--rows", "1000", "--noise", "0.1", "--seed", "10", "--out", "s3",
        ],
    );
    assert_eq!(code(&o), 0);
    assert_ne!(csv, fs::read(dir.join("s3/synthetic.csv")).unwrap());
}

#[test]
fn noiseless_synthetic_is_memorized_by_unbounded_tree() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let o = clickboost(
        dir,
        &[
            "synth", "--rows", "500", "--noise", "0", "--seed", "1", "--out", "s",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let table = load_csv(dir.join("s/synthetic.csv"), &Schema::advertising()).unwrap();
    let m = encode(&table, &EncodingConfig::default()).unwrap();
    let cfg = TreeConfig {
        max_depth: 64,
        min_samples_leaf: 1,
        min_weight_leaf: 0.0,
    };
    let tree = tree_fit(&m, &WeightVector::uniform(m.n_rows()).unwrap(), &cfg).unwrap();
    let pred = clickboost::trees::tree_predict(&tree, &m).unwrap();
    assert_eq!(pred.labels, m.labels());
}

#[test]
fn stats_reports_and_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let o = clickboost(
        dir,
        &[
            "synth", "--rows", "2000", "--noise", "0.1", "--seed", "3", "--out", "s",
        ],
    );
    assert_eq!(code(&o), 0);
    let o = clickboost(
        dir,
        &[
            "stats",
            "s/synthetic.csv",
            "--out",
            "st",
            "--format",
            "structured",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let stats: StatsSummary = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(fs::read(dir.join("st/stats.json")).unwrap(), o.stdout);
    assert!(fs::read_to_string(dir.join("st/stats.txt"))
        .unwrap()
        .contains("Variable Name"));

    // Generator moments against the sampled ones: mean within 4 standard
    // errors, variance within 4 standard errors of the sample variance.
    let sidecar: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("s/synthetic.rule.json")).unwrap())
            .unwrap();
    let n = stats.n_rows as f64;
    for col in sidecar["rule"]["columns"].as_array().unwrap() {
        let name = col["name"].as_str().unwrap();
        let (mean, var) = (
            col["mean"].as_f64().unwrap(),
            col["variance"].as_f64().unwrap(),
        );
        let s = stats.column(name).unwrap();
        assert!(
            (s.mean - mean).abs() <= 4.0 * (var / n).sqrt(),
            "{name} mean {} vs {mean}",
            s.mean
        );
        // Uniform kurtosis 9/5 gives Var(s^2) = var^2 (9/5 - 1) / n.
        let var_se = var * (0.8 / n).sqrt();
        assert!(
            (s.variance - var).abs() <= 4.0 * var_se,
            "{name} variance {} vs {var}",
            s.variance
        );
        assert!(s.min >= col["low"].as_f64().unwrap() && s.max <= col["high"].as_f64().unwrap());
    }

    let header = fs::read_to_string(dir.join("s/synthetic.csv")).unwrap();
    write(
        dir,
        "empty.csv",
        &format!("{}\n", header.lines().next().unwrap()),
    );
    let o = clickboost(dir, &["stats", "empty.csv", "--out", "st2"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("no rows"), "{}", stderr(&o));
    let mut lines: Vec<String> = header.lines().take(3).map(String::from).collect();
    let mut fields: Vec<&str> = lines[2].split(',').collect();
    fields[1] = "old";
    lines[2] = fields.join(",");
    write(dir, "bad.csv", &lines.join("\n"));
    let o = clickboost(dir, &["stats", "bad.csv", "--out", "st3"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("row 2, column `Age`"), "{}", stderr(&o));
}

#[test]
fn trees_respect_bayes_bound_and_memorize_training_data() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(
        dir,
        "exp.toml",
        r#"
seed = 8
[data.synth]
n_rows = 1000
noise = 0.1
[[models]]
kind = "tree"
[[models]]
kind = "tree"
name = "deep"
max_depth = 64
min_samples_leaf = 1
"#,
    );
    assert_eq!(
        code(&clickboost(
            dir,
            &["train", "--config", "exp.toml", "--out", "r"]
        )),
        0
    );
    let o = clickboost(dir, &["evaluate", "--config", "exp.toml", "--out", "r"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let tree = read_report(&dir.join("r/reports/tree.json"));
    assert!(
        tree.test.accuracy <= 0.9 + 0.03,
        "test accuracy {}",
        tree.test.accuracy
    );
    let deep = read_report(&dir.join("r/reports/deep.json")).train;
    for v in [
        deep.accuracy,
        deep.weighted_precision,
        deep.weighted_recall,
        deep.weighted_f1,
    ] {
        assert_eq!(v, 1.0);
    }
}

#[test]
fn default_boosting_records_several_rounds_at_low_noise() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(
        dir,
        "exp.toml",
        "seed = 1\n[data.synth]\nn_rows = 1000\nnoise = 0.05\n[[models]]\nkind = \"lstm_adaboost\"\n",
    );
    let o = clickboost(dir, &["train", "--config", "exp.toml", "--out", "r"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = fs::read_to_string(dir.join("r/models/lstm_adaboost.model")).unwrap();
    let art = clickboost::cli::ModelArtifact::from_text(&text).unwrap();
    match art.model {
        clickboost::cli::TrainedModel::LstmAdaboost(e) => {
            assert!(e.rounds.len() >= 3, "{} rounds", e.rounds.len())
        }
        other => panic!("unexpected {}", other.kind()),
    }
}
