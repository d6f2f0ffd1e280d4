use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{metrics, ConfusionMatrix, EvalError, MetricsReport, Result};

/// Train and test evaluation of one named model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub model: String,
    pub train_confusion: ConfusionMatrix,
    pub test_confusion: ConfusionMatrix,
    pub train: MetricsReport,
    pub test: MetricsReport,
}

impl ModelReport {
    pub fn from_confusion(
        model: impl Into<String>,
        train: ConfusionMatrix,
        test: ConfusionMatrix,
    ) -> Result<Self> {
        Ok(Self {
            model: model.into(),
            train: metrics(&train)?,
            test: metrics(&test)?,
            train_confusion: train,
            test_confusion: test,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Accuracy, recall, precision and F1 rows with train and test columns.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.model);
        let _ = writeln!(out, "{:<12}{:>10}{:>10}", "Metric", "Train", "Test");
        for (name, tr, te) in metric_rows(&self.train, &self.test) {
            let _ = writeln!(out, "{name:<12}{tr:>10.3}{te:>10.3}");
        }
        for (label, cm) in [
            ("train", &self.train_confusion),
            ("test", &self.test_confusion),
        ] {
            let _ = writeln!(
                out,
                "{label} confusion: tn {} fp {} fn {} tp {}",
                cm.tn, cm.fp, cm.fn_, cm.tp
            );
        }
        if !self.train.zero_division.is_empty() || !self.test.zero_division.is_empty() {
            let _ = writeln!(
                out,
                "zero division set to 0: train [{}] test [{}]",
                self.train.zero_division.join(", "),
                self.test.zero_division.join(", ")
            );
        }
        out
    }
}

const METRICS: [&str; 4] = ["accuracy", "precision", "recall", "f1"];

fn weighted(report: &MetricsReport, metric: &str) -> f64 {
    match metric {
        "accuracy" => report.accuracy,
        "precision" => report.weighted_precision,
        "recall" => report.weighted_recall,
        "f1" => report.weighted_f1,
        _ => unreachable!("known metric"),
    }
}

fn metric_rows<'a>(
    train: &'a MetricsReport,
    test: &'a MetricsReport,
) -> impl Iterator<Item = (&'static str, f64, f64)> + 'a {
    [
        ("Accuracy", "accuracy"),
        ("Recall", "recall"),
        ("Precision", "precision"),
        ("F1", "f1"),
    ]
    .into_iter()
    .map(move |(label, key)| (label, weighted(train, key), weighted(test, key)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub model: String,
    pub train: MetricsReport,
    pub test: MetricsReport,
    /// Train accuracy minus test accuracy.
    pub generalization_gap: f64,
    /// Test accuracy minus the best test accuracy among the other models.
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
}

/// Tabulates the models side by side; names must be unique.
pub fn compare(reports: &[ModelReport]) -> Result<ComparisonReport> {
    if reports.is_empty() {
        return Err(EvalError::NoModels);
    }
    let mut seen = BTreeSet::new();
    for r in reports {
        if !seen.insert(r.model.as_str()) {
            return Err(EvalError::DuplicateModel(r.model.clone()));
        }
    }
    let rows = reports
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let best_other = reports
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, o)| o.test.accuracy)
                .max_by(f64::total_cmp);
            ComparisonRow {
                model: r.model.clone(),
                train: r.train.clone(),
                test: r.test.clone(),
                generalization_gap: r.train.accuracy - r.test.accuracy,
                margin: best_other.map(|b| r.test.accuracy - b),
            }
        })
        .collect();
    Ok(ComparisonReport { rows })
}

impl ComparisonReport {
    pub fn row(&self, model: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.model == model)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let width = self
            .rows
            .iter()
            .map(|r| r.model.len())
            .max()
            .unwrap_or(5)
            .max(5)
            + 2;
        let mut out = format!("{:<width$}", "Model");
        for part in ["Train", "Test"] {
            for m in ["Acc", "Rec", "Prec", "F1"] {
                out.push_str(&format!("{:>11}", format!("{part} {m}")));
            }
        }
        out.push_str(&format!("{:>9}{:>9}\n", "Gap", "Margin"));
        for r in &self.rows {
            out.push_str(&format!("{:<width$}", r.model));
            for part in [&r.train, &r.test] {
                for (_, v, _) in metric_rows(part, part) {
                    out.push_str(&format!("{v:>11.3}"));
                }
            }
            let margin = r
                .margin
                .map_or_else(|| "-".to_string(), |m| format!("{m:.3}"));
            out.push_str(&format!("{:>9.3}{margin:>9}\n", r.generalization_gap));
        }
        out
    }

    /// Long-format chart data: one `model,partition,metric,value` row per
    /// model, partition and weighted metric.
    pub fn chart_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["model", "partition", "metric", "value"])
            .expect("in-memory write");
        for r in &self.rows {
            for (part, report) in [("train", &r.train), ("test", &r.test)] {
                for metric in METRICS {
                    let value = format!("{:?}", weighted(report, metric));
                    w.write_record([r.model.as_str(), part, metric, value.as_str()])
                        .expect("in-memory write");
                }
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }
}
