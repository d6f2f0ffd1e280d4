use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{ColumnKind, DataError, RawTable, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnStats {
    pub name: String,
    pub max: f64,
    pub min: f64,
    pub mean: f64,
    pub median: f64,
    /// Population variance.
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsSummary {
    pub n_rows: usize,
    pub columns: Vec<ColumnStats>,
}

impl StatsSummary {
    pub fn column(&self, name: &str) -> Option<&ColumnStats> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialize") + "\n"
    }

    /// Aligned table with one row per variable.
    pub fn to_text(&self) -> String {
        let header = [
            "Variable Name",
            "Maximum",
            "Minimum",
            "Mean",
            "Median",
            "Variance",
        ];
        let rows: Vec<[String; 6]> = self
            .columns
            .iter()
            .map(|c| {
                [
                    c.name.clone(),
                    fmt_trim(c.max, 3),
                    fmt_trim(c.min, 3),
                    fmt_trim(c.mean, 3),
                    fmt_trim(c.median, 3),
                    fmt_trim(c.variance, 3),
                ]
            })
            .collect();
        let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
        for r in &rows {
            for (w, cell) in widths.iter_mut().zip(r) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        let push_row = |out: &mut String, cells: &[&str]| {
            for (k, (cell, w)) in cells.iter().zip(&widths).enumerate() {
                if k == 0 {
                    let _ = write!(out, "{cell:<w$}");
                } else {
                    let _ = write!(out, "  {cell:>w$}");
                }
            }
            out.push('\n');
        };
        push_row(&mut out, &header);
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        push_row(
            &mut out,
            &rule.iter().map(String::as_str).collect::<Vec<_>>(),
        );
        for r in &rows {
            push_row(&mut out, &r.iter().map(String::as_str).collect::<Vec<_>>());
        }
        out
    }
}

/// Rounds to `digits` decimals and strips trailing zeros (`35.940` -> `35.94`).
pub(crate) fn fmt_trim(v: f64, digits: usize) -> String {
    let s = format!("{v:.digits$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn column_stats(name: &str, values: &mut [f64]) -> Result<ColumnStats> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(DataError::NonFinite {
            column: name.to_string(),
        });
    }
    let n = values.len();
    values.sort_by(f64::total_cmp);
    let mean = values.iter().sum::<f64>() / n as f64;
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
    let median = if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    };
    Ok(ColumnStats {
        name: name.to_string(),
        max: values[n - 1],
        min: values[0],
        // rounding in the sum can push a constant column's mean a hair outside [min, max]
        mean: mean.clamp(values[0], values[n - 1]),
        median,
        variance,
    })
}

/// Max/min/mean/median/variance for every numeric column and the label.
pub fn summarize(table: &RawTable) -> Result<StatsSummary> {
    if table.n_rows() == 0 {
        return Err(DataError::NoRows);
    }
    let quantitative: Vec<usize> = table
        .schema()
        .columns()
        .iter()
        .enumerate()
        .filter(|(_, c)| matches!(c.kind, ColumnKind::Numeric | ColumnKind::Label))
        .map(|(i, _)| i)
        .collect();
    if !quantitative
        .iter()
        .any(|&i| table.schema().columns()[i].kind == ColumnKind::Numeric)
    {
        return Err(DataError::NoNumericColumns);
    }
    let columns = quantitative
        .into_iter()
        .map(|j| {
            let mut values: Vec<f64> = table
                .rows()
                .iter()
                .map(|r| r[j].as_number().expect("numeric cell"))
                .collect();
            column_stats(&table.schema().columns()[j].name, &mut values)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StatsSummary {
        n_rows: table.n_rows(),
        columns,
    })
}
