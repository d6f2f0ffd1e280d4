use std::path::Path;

use chrono::NaiveDateTime;

use super::{Cell, ColumnKind, DataError, RawTable, Result, Schema};

const TIMESTAMP_FORMATS: [&str; 2] = ["%Y-%m-%d %H:%M:%S", "%Y-%m-%d %H:%M"];
const TIMESTAMP_OUT: &str = "%Y-%m-%d %H:%M:%S";

pub fn parse_timestamp(s: &str) -> Option<NaiveDateTime> {
    TIMESTAMP_FORMATS
        .iter()
        .find_map(|f| NaiveDateTime::parse_from_str(s, f).ok())
}

fn parse_cell(raw: &str, kind: ColumnKind) -> Option<Cell> {
    let s = raw.trim();
    match kind {
        ColumnKind::Numeric => s
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(Cell::Number),
        ColumnKind::Categorical => Some(Cell::Text(s.to_string())),
        ColumnKind::Timestamp => parse_timestamp(s).map(Cell::Time),
        ColumnKind::Label => match s {
            "0" => Some(Cell::Label(0)),
            "1" => Some(Cell::Label(1)),
            _ => None,
        },
    }
}

/// Reads a comma-separated file whose header must equal `schema`'s names in order.
pub fn load_csv(path: impl AsRef<Path>, schema: &Schema) -> Result<RawTable> {
    let path = path.as_ref();
    let io_err = |e: &dyn std::fmt::Display| DataError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)
        .map_err(|e| io_err(&e))?;

    let found: Vec<String> = reader
        .headers()
        .map_err(|e| io_err(&e))?
        .iter()
        .map(|h| h.trim().trim_start_matches('\u{feff}').to_string())
        .collect();
    let expected = schema.names();
    if found != expected {
        return Err(DataError::HeaderMismatch { expected, found });
    }

    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row_no = i + 1;
        let record = record.map_err(|e| io_err(&e))?;
        if record.len() != schema.len() {
            return Err(DataError::RowLength {
                row: row_no,
                expected: schema.len(),
                found: record.len(),
            });
        }
        let mut row = Vec::with_capacity(schema.len());
        for (raw, col) in record.iter().zip(schema.columns()) {
            match parse_cell(raw, col.kind) {
                Some(cell) => row.push(cell),
                None if col.kind == ColumnKind::Label => {
                    return Err(DataError::LabelDomain {
                        row: row_no,
                        value: raw.to_string(),
                    })
                }
                None => {
                    return Err(DataError::Parse {
                        row: row_no,
                        column: col.name.clone(),
                        value: raw.to_string(),
                    })
                }
            }
        }
        rows.push(row);
    }
    RawTable::new(schema.clone(), rows)
}

/// Writes `table` with a header row; the output reloads to an equal table.
pub fn write_csv(table: &RawTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io_err = |e: &dyn std::fmt::Display| DataError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let mut writer = csv::Writer::from_path(path).map_err(|e| io_err(&e))?;
    writer
        .write_record(table.schema().names())
        .map_err(|e| io_err(&e))?;
    for row in table.rows() {
        let fields: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Number(v) => format!("{v}"),
                Cell::Text(s) => s.clone(),
                Cell::Time(t) => t.format(TIMESTAMP_OUT).to_string(),
                Cell::Label(v) => v.to_string(),
            })
            .collect();
        writer.write_record(&fields).map_err(|e| io_err(&e))?;
    }
    writer.flush().map_err(|e| io_err(&e))
}
