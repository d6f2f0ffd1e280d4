//! Tabular data: schema, ingestion, statistics, encoding, scaling and splits.

mod encode;
mod load;
mod matrix;
mod scale;
mod split;
mod stats;
mod synth;

use std::collections::HashSet;

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use encode::{encode, Encoder, EncodingConfig, TextMode};
pub use load::{load_csv, parse_timestamp, write_csv};
pub use matrix::FeatureMatrix;
pub use scale::{apply_standardize, fit_standardize, ScalerParams};
pub use split::{split, split_indices, SplitSpec};
pub use stats::{summarize, ColumnStats, StatsSummary};
pub use synth::{synthesize, GeneratingRule, SynthConfig, Synthetic};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("header mismatch: expected [{}], found [{}]", expected.join(", "), found.join(", "))]
    HeaderMismatch {
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("row {row}, column `{column}`: cannot parse `{value}`")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row}: {found} fields, expected {expected}")]
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}: label `{value}` is not 0 or 1")]
    LabelDomain { row: usize, value: String },
    #[error("invalid schema: {0}")]
    Schema(String),
    #[error("no rows")]
    NoRows,
    #[error("no numeric columns")]
    NoNumericColumns,
    #[error("non-finite value in column `{column}`")]
    NonFinite { column: String },
    #[error("unknown category `{value}` in column `{column}`")]
    UnknownCategory { column: String, value: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("invalid synthetic config: {0}")]
    InvalidSynth(String),
}

pub type Result<T> = std::result::Result<T, DataError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Numeric,
    Categorical,
    Timestamp,
    Label,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSchema {
    pub name: String,
    pub kind: ColumnKind,
}

impl ColumnSchema {
    pub fn new(name: impl Into<String>, kind: ColumnKind) -> Self {
        Self {
            name: name.into(),
            kind,
        }
    }
}

/// Ordered list of columns with exactly one label column and unique names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    columns: Vec<ColumnSchema>,
}

impl Schema {
    pub fn new(columns: Vec<ColumnSchema>) -> Result<Self> {
        let labels = columns
            .iter()
            .filter(|c| c.kind == ColumnKind::Label)
            .count();
        if labels != 1 {
            return Err(DataError::Schema(format!(
                "expected exactly one label column, found {labels}"
            )));
        }
        let mut seen = HashSet::new();
        for c in &columns {
            if !seen.insert(c.name.as_str()) {
                return Err(DataError::Schema(format!("duplicate column `{}`", c.name)));
            }
        }
        Ok(Self { columns })
    }

    /// The full advertising click schema.
    pub fn advertising() -> Self {
        use ColumnKind::*;
        Self::new(vec![
            ColumnSchema::new("Daily Time Spent on Site", Numeric),
            ColumnSchema::new("Age", Numeric),
            ColumnSchema::new("Area Income", Numeric),
            ColumnSchema::new("Daily Internet Usage", Numeric),
            ColumnSchema::new("Ad Topic Line", Categorical),
            ColumnSchema::new("City", Categorical),
            ColumnSchema::new("Male", Categorical),
            ColumnSchema::new("Country", Categorical),
            ColumnSchema::new("Timestamp", Timestamp),
            ColumnSchema::new("Clicked on Ad", Label),
        ])
        .expect("static schema is valid")
    }

    /// The four quantitative columns plus the label.
    pub fn advertising_numeric() -> Self {
        use ColumnKind::*;
        Self::new(vec![
            ColumnSchema::new("Daily Time Spent on Site", Numeric),
            ColumnSchema::new("Age", Numeric),
            ColumnSchema::new("Area Income", Numeric),
            ColumnSchema::new("Daily Internet Usage", Numeric),
            ColumnSchema::new("Clicked on Ad", Label),
        ])
        .expect("static schema is valid")
    }

    pub fn columns(&self) -> &[ColumnSchema] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn label_index(&self) -> usize {
        self.columns
            .iter()
            .position(|c| c.kind == ColumnKind::Label)
            .expect("validated schema has a label")
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn names(&self) -> Vec<String> {
        self.columns.iter().map(|c| c.name.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Text(String),
    Time(NaiveDateTime),
    Label(u8),
}

impl Cell {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            Cell::Number(v) => Some(*v),
            Cell::Label(v) => Some(*v as f64),
            _ => None,
        }
    }
}

/// Parsed rows, one [`Cell`] per schema column.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    schema: Schema,
    rows: Vec<Vec<Cell>>,
}

impl RawTable {
    pub fn new(schema: Schema, rows: Vec<Vec<Cell>>) -> Result<Self> {
        let label = schema.label_index();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != schema.len() {
                return Err(DataError::RowLength {
                    row: i + 1,
                    expected: schema.len(),
                    found: row.len(),
                });
            }
            for (cell, col) in row.iter().zip(schema.columns()) {
                let ok = matches!(
                    (cell, col.kind),
                    (Cell::Number(_), ColumnKind::Numeric)
                        | (Cell::Text(_), ColumnKind::Categorical)
                        | (Cell::Time(_), ColumnKind::Timestamp)
                        | (Cell::Label(0 | 1), ColumnKind::Label)
                );
                if !ok {
                    if col.kind == ColumnKind::Label {
                        return Err(DataError::LabelDomain {
                            row: i + 1,
                            value: format!("{cell:?}"),
                        });
                    }
                    return Err(DataError::Parse {
                        row: i + 1,
                        column: col.name.clone(),
                        value: format!("{cell:?}"),
                    });
                }
            }
            debug_assert!(matches!(row[label], Cell::Label(_)));
        }
        Ok(Self { schema, rows })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn labels(&self) -> Vec<u8> {
        let li = self.schema.label_index();
        self.rows
            .iter()
            .map(|r| match r[li] {
                Cell::Label(v) => v,
                _ => unreachable!("validated label cell"),
            })
            .collect()
    }

    /// Rows at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> RawTable {
        RawTable {
            schema: self.schema.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    /// Keeps the named columns plus the label, in schema order.
    pub fn project(&self, names: &[String]) -> Result<RawTable> {
        if let Some(missing) = names.iter().find(|n| self.schema.index_of(n).is_none()) {
            return Err(DataError::Schema(format!("no column `{missing}`")));
        }
        let keep: Vec<usize> = self
            .schema
            .columns()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.kind == ColumnKind::Label || names.contains(&c.name))
            .map(|(i, _)| i)
            .collect();
        let schema = Schema::new(
            keep.iter()
                .map(|&i| self.schema.columns()[i].clone())
                .collect(),
        )?;
        let rows = self
            .rows
            .iter()
            .map(|r| keep.iter().map(|&i| r[i].clone()).collect())
            .collect();
        Ok(RawTable { schema, rows })
    }
}

/// The four quantitative advertising columns, in schema order.
pub const QUANTITATIVE_COLUMNS: [&str; 4] = [
    "Daily Time Spent on Site",
    "Age",
    "Area Income",
    "Daily Internet Usage",
];
