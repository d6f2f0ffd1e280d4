use serde::{Deserialize, Serialize};

use super::{EvalError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tp: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tn + self.fp + self.fn_ + self.tp
    }

    /// The matrix obtained by swapping predictions and labels.
    pub fn transpose(&self) -> Self {
        Self {
            fp: self.fn_,
            fn_: self.fp,
            ..*self
        }
    }

    /// The matrix obtained by relabeling class 0 as 1 and vice versa.
    pub fn relabel(&self) -> Self {
        Self {
            tn: self.tp,
            fp: self.fn_,
            fn_: self.fp,
            tp: self.tn,
        }
    }
}

/// Counts `(label, pred)` pairs.
pub fn confusion(preds: &[u8], labels: &[u8]) -> Result<ConfusionMatrix> {
    if preds.len() != labels.len() {
        return Err(EvalError::Length {
            preds: preds.len(),
            labels: labels.len(),
        });
    }
    let mut cm = ConfusionMatrix::default();
    for (i, (&p, &y)) in preds.iter().zip(labels).enumerate() {
        match (y, p) {
            (0, 0) => cm.tn += 1,
            (0, 1) => cm.fp += 1,
            (1, 0) => cm.fn_ += 1,
            (1, 1) => cm.tp += 1,
            _ => {
                return Err(EvalError::Domain {
                    index: i,
                    pred: p,
                    label: y,
                })
            }
        }
    }
    Ok(cm)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// True count of the class.
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub class_0: ClassMetrics,
    pub class_1: ClassMetrics,
    pub weighted_precision: f64,
    pub weighted_recall: f64,
    pub weighted_f1: f64,
    /// Names of the quantities that hit 0/0 and were set to 0.
    pub zero_division: Vec<String>,
}

fn ratio(num: u64, den: u64, name: &str, flags: &mut Vec<String>) -> f64 {
    if den == 0 {
        flags.push(name.to_string());
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn harmonic(p: f64, r: f64, name: &str, flags: &mut Vec<String>) -> f64 {
    if p + r == 0.0 {
        flags.push(name.to_string());
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Accuracy, per-class precision/recall/F1 and their support-weighted means.
pub fn metrics(cm: &ConfusionMatrix) -> Result<MetricsReport> {
    let n = cm.total();
    if n == 0 {
        return Err(EvalError::Empty);
    }
    let mut flags = Vec::new();
    let (s0, s1) = (cm.tn + cm.fp, cm.fn_ + cm.tp);
    let p0 = ratio(cm.tn, cm.tn + cm.fn_, "precision_0", &mut flags);
    let r0 = ratio(cm.tn, s0, "recall_0", &mut flags);
    let f0 = harmonic(p0, r0, "f1_0", &mut flags);
    let p1 = ratio(cm.tp, cm.tp + cm.fp, "precision_1", &mut flags);
    let r1 = ratio(cm.tp, s1, "recall_1", &mut flags);
    let f1 = harmonic(p1, r1, "f1_1", &mut flags);
    let (w0, w1) = (s0 as f64 / n as f64, s1 as f64 / n as f64);
    Ok(MetricsReport {
        accuracy: (cm.tp + cm.tn) as f64 / n as f64,
        class_0: ClassMetrics {
            precision: p0,
            recall: r0,
            f1: f0,
            support: s0,
        },
        class_1: ClassMetrics {
            precision: p1,
            recall: r1,
            f1,
            support: s1,
        },
        weighted_precision: w0 * p0 + w1 * p1,
        weighted_recall: w0 * r0 + w1 * r1,
        weighted_f1: w0 * f0 + w1 * f1,
        zero_division: flags,
    })
}
