use std::collections::{BTreeMap, BTreeSet};

use chrono::{Datelike, Timelike};
use serde::{Deserialize, Serialize};

use super::{Cell, ColumnKind, DataError, FeatureMatrix, RawTable, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TextMode {
    Drop,
    Frequency,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EncodingConfig {
    /// Categorical columns with at most this many levels are one-hot encoded;
    /// larger ones are frequency encoded.
    pub onehot_cap: usize,
    /// Reject categories unseen at fit time instead of encoding them as 0.
    pub strict: bool,
    /// Free-text columns, handled by `text_mode` instead of the categorical rules.
    pub text_columns: Vec<String>,
    pub text_mode: TextMode,
}

impl Default for EncodingConfig {
    fn default() -> Self {
        Self {
            onehot_cap: 12,
            strict: false,
            text_columns: vec!["Ad Topic Line".into()],
            text_mode: TextMode::Drop,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum ColumnEncoder {
    Numeric {
        col: usize,
    },
    /// Two-level column as one {0,1} feature, 1 for the larger level.
    Indicator {
        col: usize,
        levels: [String; 2],
    },
    OneHot {
        col: usize,
        levels: Vec<String>,
    },
    Frequency {
        col: usize,
        freq: BTreeMap<String, f64>,
    },
    Timestamp {
        col: usize,
    },
}

/// Column-wise encoder fitted on a training table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Encoder {
    config: EncodingConfig,
    columns: Vec<ColumnEncoder>,
    schema_names: Vec<String>,
    feature_names: Vec<String>,
}

impl Encoder {
    pub fn fit(table: &RawTable, config: &EncodingConfig) -> Result<Self> {
        let schema = table.schema();
        let mut columns = Vec::new();
        let mut names = Vec::new();
        for (j, col) in schema.columns().iter().enumerate() {
            match col.kind {
                ColumnKind::Label => {}
                ColumnKind::Numeric => {
                    columns.push(ColumnEncoder::Numeric { col: j });
                    names.push(col.name.clone());
                }
                ColumnKind::Timestamp => {
                    columns.push(ColumnEncoder::Timestamp { col: j });
                    names.push(format!("{}.hour", col.name));
                    names.push(format!("{}.weekday", col.name));
                }
                ColumnKind::Categorical => {
                    let values = text_values(table, j);
                    let is_text = config.text_columns.contains(&col.name);
                    if is_text && config.text_mode == TextMode::Drop {
                        continue;
                    }
                    let levels: BTreeSet<&str> = values.iter().copied().collect();
                    if !is_text && levels.len() == 2 {
                        let mut it = levels.iter();
                        let lo = it.next().unwrap().to_string();
                        let hi = it.next().unwrap().to_string();
                        columns.push(ColumnEncoder::Indicator {
                            col: j,
                            levels: [lo, hi],
                        });
                        names.push(col.name.clone());
                    } else if !is_text && levels.len() <= config.onehot_cap {
                        let levels: Vec<String> = levels.iter().map(|s| s.to_string()).collect();
                        names.extend(levels.iter().map(|l| format!("{}={l}", col.name)));
                        columns.push(ColumnEncoder::OneHot { col: j, levels });
                    } else {
                        let mut counts: BTreeMap<String, f64> = BTreeMap::new();
                        for v in &values {
                            *counts.entry(v.to_string()).or_default() += 1.0;
                        }
                        let n = values.len().max(1) as f64;
                        for c in counts.values_mut() {
                            *c /= n;
                        }
                        columns.push(ColumnEncoder::Frequency {
                            col: j,
                            freq: counts,
                        });
                        names.push(format!("{}.freq", col.name));
                    }
                }
            }
        }
        Ok(Self {
            config: config.clone(),
            columns,
            schema_names: schema.names(),
            feature_names: names,
        })
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Encodes `table`, returning the matrix and the number of cells holding
    /// categories unseen at fit time (encoded as 0 unless `strict`).
    pub fn transform(&self, table: &RawTable) -> Result<(FeatureMatrix, usize)> {
        if table.schema().names() != self.schema_names {
            return Err(DataError::HeaderMismatch {
                expected: self.schema_names.clone(),
                found: table.schema().names(),
            });
        }
        let schema = table.schema();
        let mut unknown = 0usize;
        let mut values = Vec::with_capacity(table.n_rows() * self.feature_names.len());
        for row in table.rows() {
            for enc in &self.columns {
                match enc {
                    ColumnEncoder::Numeric { col } => {
                        values.push(row[*col].as_number().expect("numeric"))
                    }
                    ColumnEncoder::Timestamp { col } => {
                        let Cell::Time(t) = &row[*col] else {
                            unreachable!("timestamp cell")
                        };
                        values.push(t.hour() as f64);
                        values.push(t.weekday().num_days_from_monday() as f64);
                    }
                    ColumnEncoder::Indicator { col, levels } => {
                        let v = text_cell(row, *col);
                        if v == levels[1] {
                            values.push(1.0);
                        } else {
                            if v != levels[0] {
                                self.unknown(&schema.columns()[*col].name, v, &mut unknown)?;
                            }
                            values.push(0.0);
                        }
                    }
                    ColumnEncoder::OneHot { col, levels } => {
                        let v = text_cell(row, *col);
                        let hit = levels.iter().position(|l| l == v);
                        if hit.is_none() {
                            self.unknown(&schema.columns()[*col].name, v, &mut unknown)?;
                        }
                        values.extend((0..levels.len()).map(|k| {
                            if Some(k) == hit {
                                1.0
                            } else {
                                0.0
                            }
                        }));
                    }
                    ColumnEncoder::Frequency { col, freq } => {
                        let v = text_cell(row, *col);
                        match freq.get(v) {
                            Some(f) => values.push(*f),
                            None => {
                                self.unknown(&schema.columns()[*col].name, v, &mut unknown)?;
                                values.push(0.0);
                            }
                        }
                    }
                }
            }
        }
        let matrix = FeatureMatrix::new(
            values,
            self.feature_names.len(),
            table.labels(),
            self.feature_names.clone(),
        )?;
        Ok((matrix, unknown))
    }

    fn unknown(&self, column: &str, value: &str, count: &mut usize) -> Result<()> {
        if self.config.strict {
            return Err(DataError::UnknownCategory {
                column: column.to_string(),
                value: value.to_string(),
            });
        }
        *count += 1;
        Ok(())
    }
}

fn text_cell(row: &[Cell], col: usize) -> &str {
    match &row[col] {
        Cell::Text(s) => s,
        _ => unreachable!("categorical cell"),
    }
}

fn text_values(table: &RawTable, col: usize) -> Vec<&str> {
    table.rows().iter().map(|r| text_cell(r, col)).collect()
}

/// Fits an [`Encoder`] on `table` and encodes the same table.
pub fn encode(table: &RawTable, config: &EncodingConfig) -> Result<FeatureMatrix> {
    let enc = Encoder::fit(table, config)?;
    Ok(enc.transform(table)?.0)
}
