//! Data and schema CSV files.
//!
//! Data: a header `dmu,<var>,...` then one row per DMU. A cell is a plain
//! number or `lo..hi`. Lines starting with `#` are ignored.
//! Schema: rows `name,role`, with an optional `name,role` header.

use std::collections::HashMap;

use super::{build_schema, Dataset, DatasetError, DmuRecord, Location, Role};
use crate::interval::Interval;

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes())
}

fn csv_error(e: csv::Error) -> DatasetError {
    DatasetError::Csv {
        line: e.position().map(|p| p.line()),
        message: e.to_string(),
    }
}

fn line_of(record: &csv::StringRecord) -> Option<u64> {
    record.position().map(|p| p.line())
}

/// Reads a schema file into `(name, role)` pairs in file order.
pub fn parse_schema(schema_text: &str) -> Result<Vec<(String, Role)>, DatasetError> {
    let mut out = Vec::new();
    for (k, record) in reader(schema_text).records().enumerate() {
        let record = record.map_err(csv_error)?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 2 {
            return Err(DatasetError::Csv {
                line: line_of(&record),
                message: format!("expected 2 fields (name,role), found {}", record.len()),
            });
        }
        let (name, role) = (&record[0], &record[1]);
        if k == 0 && name == "name" && role == "role" {
            continue;
        }
        let role = role.parse().map_err(|role| DatasetError::UnknownRole {
            name: name.to_string(),
            role,
        })?;
        out.push((name.to_string(), role));
    }
    Ok(out)
}

/// Parses a cell. `None` when malformed; the flag reports reversed endpoints.
fn parse_cell(cell: &str) -> Option<(Interval, bool)> {
    let num = |s: &str| s.trim().parse::<f64>().ok().filter(|v| v.is_finite());
    match cell.split_once("..") {
        None => num(cell).map(|v| (Interval::degenerate(v), false)),
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b)?);
            Some((Interval::spanning(a, b).ok()?, a > b))
        }
    }
}

/// Parses a data file against a schema file.
///
/// The dataset's column order follows the data header. Reversed cells are
/// swapped and reported through [`Dataset::warnings`].
pub fn parse_csv(data_text: &str, schema_text: &str) -> Result<Dataset, DatasetError> {
    let declared = parse_schema(schema_text)?;
    let roles: HashMap<&str, Role> = declared.iter().map(|(n, r)| (n.as_str(), *r)).collect();

    let mut records = reader(data_text).into_records();
    let header = loop {
        match records.next() {
            None => {
                return Err(DatasetError::SchemaMismatch(
                    "data file has no header row".into(),
                ))
            }
            Some(r) => {
                let r = r.map_err(csv_error)?;
                if !r.iter().all(str::is_empty) {
                    break r;
                }
            }
        }
    };
    if header.get(0) != Some("dmu") {
        return Err(DatasetError::SchemaMismatch(format!(
            "data header must start with 'dmu', found '{}'",
            header.get(0).unwrap_or("")
        )));
    }
    let columns: Vec<&str> = header.iter().skip(1).collect();
    for name in &columns {
        if !roles.contains_key(name) {
            return Err(DatasetError::SchemaMismatch(format!(
                "column '{name}' is not in the schema"
            )));
        }
    }
    for (name, _) in &declared {
        if !columns.contains(&name.as_str()) {
            return Err(DatasetError::SchemaMismatch(format!(
                "schema variable '{name}' has no data column"
            )));
        }
    }
    if declared.len() != columns.len() {
        return Err(DatasetError::SchemaMismatch(
            "duplicate variable in schema or header".into(),
        ));
    }
    let schema = build_schema(columns.iter().map(|n| (n.to_string(), roles[n])).collect())?;

    let mut dmus = Vec::new();
    let mut lines = Vec::new();
    let mut warnings = Vec::new();
    for record in records {
        let record = record.map_err(csv_error)?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let line = line_of(&record);
        let name = record[0].to_string();
        if record.len() != schema.len() + 1 {
            return Err(DatasetError::DimensionMismatch {
                dmu: name,
                expected: schema.len(),
                found: record.len() - 1,
            });
        }
        let mut dmu = DmuRecord {
            name,
            inputs: Vec::new(),
            outputs: Vec::new(),
        };
        for (spec, cell) in schema.iter().zip(record.iter().skip(1)) {
            let at = || Location {
                line,
                dmu: dmu.name.clone(),
                variable: spec.name.clone(),
            };
            let (value, reversed) =
                parse_cell(cell).ok_or_else(|| DatasetError::MalformedCell {
                    at: at(),
                    cell: cell.to_string(),
                })?;
            if reversed {
                warnings.push(format!(
                    "reversed endpoints '{cell}' at {} normalized to {value}",
                    at()
                ));
            }
            if spec.role.is_output() {
                dmu.outputs.push(value);
            } else {
                dmu.inputs.push(value);
            }
        }
        lines.push(line.unwrap_or(0));
        dmus.push(dmu);
    }
    Dataset::from_records(schema, dmus, warnings, &lines)
}

fn format_cell(v: Interval) -> String {
    if v.is_degenerate() {
        format!("{}", v.lo())
    } else {
        format!("{}..{}", v.lo(), v.hi())
    }
}

impl Dataset {
    /// Serializes the data in the format read by [`parse_csv`].
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["dmu".to_string()];
        header.extend(self.schema.iter().map(|v| v.name.clone()));
        w.write_record(&header).expect("write to memory");
        for j in 0..self.n() {
            let mut row = vec![self.dmus[j].name.clone()];
            row.extend(self.row(j).into_iter().map(format_cell));
            w.write_record(&row).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input")
    }

    /// Serializes the schema in the format read by [`parse_schema`].
    pub fn schema_to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "role"]).expect("write to memory");
        for v in &self.schema {
            w.write_record([v.name.as_str(), v.role.as_str()])
                .expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input")
    }
}
