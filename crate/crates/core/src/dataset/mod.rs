//! Decision-making units with interval inputs and outputs.
//!
//! A [`Dataset`] pairs a schema (one [`VariableSpec`] per column, in the
//! declared order) with the DMU records. Undesirable outputs are stored on
//! the output side of each record, exactly as declared; the models see them
//! through an [`Orientation`] that moves them to the input side.

mod csv_io;
mod fixture;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::Interval;

pub use csv_io::{parse_csv, parse_schema};
pub use fixture::{tourism_fixture, TOURISM_CSV, TOURISM_SCHEMA_CSV};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Input,
    Output,
    UndesirableOutput,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Input => "input",
            Role::Output => "output",
            Role::UndesirableOutput => "undesirable_output",
        }
    }

    pub fn is_output(self) -> bool {
        !matches!(self, Role::Input)
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "input" => Ok(Role::Input),
            "output" => Ok(Role::Output),
            "undesirable_output" => Ok(Role::UndesirableOutput),
            other => Err(other.to_string()),
        }
    }
}

/// Where a problem was found, for error messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub line: Option<u64>,
    pub dmu: String,
    pub variable: String,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DMU '{}', column '{}'", self.dmu, self.variable)?;
        if let Some(line) = self.line {
            write!(f, " (line {line})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DatasetError {
    #[error("CSV error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Csv { line: Option<u64>, message: String },
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("unknown role '{role}' for variable '{name}' (expected input, output or undesirable_output)")]
    UnknownRole { name: String, role: String },
    #[error("malformed cell '{cell}' at {at}")]
    MalformedCell { at: Location, cell: String },
    #[error("negative value {value} at {at}; data must be nonnegative intervals")]
    NegativeValue { at: Location, value: f64 },
    #[error("zero denominator at {at}: lower + upper endpoint must be positive")]
    ZeroDenominator { at: Location },
    #[error("DMU '{dmu}' has {found} cells, schema declares {expected}")]
    DimensionMismatch {
        dmu: String,
        expected: usize,
        found: usize,
    },
    #[error("dataset has no DMUs")]
    NoDmus,
    #[error("schema declares no inputs")]
    NoInputs,
    #[error("schema declares no outputs")]
    NoOutputs,
    #[error("every output is undesirable; no outputs remain after moving them to the input side")]
    NoOutputsRemaining,
    #[error("DMU index {index} out of range for {n} DMUs")]
    IndexOutOfRange { index: usize, n: usize },
}

/// One column of the dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableSpec {
    pub name: String,
    pub role: Role,
    /// Position within the record's inputs (for inputs) or outputs (for
    /// both output roles).
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmuRecord {
    pub name: String,
    pub inputs: Vec<Interval>,
    pub outputs: Vec<Interval>,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    schema: Vec<VariableSpec>,
    dmus: Vec<DmuRecord>,
    warnings: Vec<String>,
}

impl PartialEq for Dataset {
    fn eq(&self, other: &Self) -> bool {
        self.schema == other.schema && self.dmus == other.dmus
    }
}

impl Dataset {
    /// Builds and validates a dataset. `variables` is the declared column
    /// order; every row lists its cells in that order.
    pub fn new(
        variables: Vec<(String, Role)>,
        rows: Vec<(String, Vec<Interval>)>,
    ) -> Result<Self, DatasetError> {
        let schema = build_schema(variables)?;
        let mut dmus = Vec::with_capacity(rows.len());
        for (name, cells) in rows {
            if cells.len() != schema.len() {
                return Err(DatasetError::DimensionMismatch {
                    dmu: name,
                    expected: schema.len(),
                    found: cells.len(),
                });
            }
            let mut record = DmuRecord {
                name,
                inputs: Vec::new(),
                outputs: Vec::new(),
            };
            for (spec, cell) in schema.iter().zip(cells) {
                if spec.role.is_output() {
                    record.outputs.push(cell);
                } else {
                    record.inputs.push(cell);
                }
            }
            dmus.push(record);
        }
        Dataset::from_records(schema, dmus, Vec::new(), &[])
    }

    pub(crate) fn from_records(
        schema: Vec<VariableSpec>,
        dmus: Vec<DmuRecord>,
        warnings: Vec<String>,
        lines: &[u64],
    ) -> Result<Self, DatasetError> {
        if dmus.is_empty() {
            return Err(DatasetError::NoDmus);
        }
        let ds = Dataset {
            schema,
            dmus,
            warnings,
        };
        for (j, dmu) in ds.dmus.iter().enumerate() {
            for spec in &ds.schema {
                let value = ds.cell(j, spec);
                let at = || Location {
                    line: lines.get(j).copied(),
                    dmu: dmu.name.clone(),
                    variable: spec.name.clone(),
                };
                if value.lo() < 0.0 {
                    return Err(DatasetError::NegativeValue {
                        at: at(),
                        value: value.lo(),
                    });
                }
                if value.endpoint_sum() <= 0.0 {
                    return Err(DatasetError::ZeroDenominator { at: at() });
                }
            }
        }
        Ok(ds)
    }

    pub fn schema(&self) -> &[VariableSpec] {
        &self.schema
    }

    pub fn dmus(&self) -> &[DmuRecord] {
        &self.dmus
    }

    pub fn dmu(&self, index: usize) -> Result<&DmuRecord, DatasetError> {
        self.dmus.get(index).ok_or(DatasetError::IndexOutOfRange {
            index,
            n: self.dmus.len(),
        })
    }

    /// Messages produced while ingesting, e.g. normalized reversed cells.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn n(&self) -> usize {
        self.dmus.len()
    }

    /// Number of declared inputs.
    pub fn m(&self) -> usize {
        self.schema.iter().filter(|v| !v.role.is_output()).count()
    }

    /// Number of declared outputs, undesirable ones included.
    pub fn s(&self) -> usize {
        self.schema.iter().filter(|v| v.role.is_output()).count()
    }

    pub fn variable(&self, name: &str) -> Option<&VariableSpec> {
        self.schema.iter().find(|v| v.name == name)
    }

    /// Value of `spec` for DMU `j`.
    pub fn cell(&self, j: usize, spec: &VariableSpec) -> Interval {
        let dmu = &self.dmus[j];
        if spec.role.is_output() {
            dmu.outputs[spec.index]
        } else {
            dmu.inputs[spec.index]
        }
    }

    /// Cells of DMU `j` in declared column order.
    pub fn row(&self, j: usize) -> Vec<Interval> {
        self.schema.iter().map(|spec| self.cell(j, spec)).collect()
    }

    pub fn is_crisp(&self) -> bool {
        self.first_interval_cell().is_none()
    }

    /// The first non-degenerate cell, scanning DMUs then columns.
    pub fn first_interval_cell(&self) -> Option<Location> {
        (0..self.n()).find_map(|j| {
            self.schema
                .iter()
                .find(|spec| !self.cell(j, spec).is_degenerate())
                .map(|spec| Location {
                    line: None,
                    dmu: self.dmus[j].name.clone(),
                    variable: spec.name.clone(),
                })
        })
    }

    /// The crisp dataset obtained by replacing every interval by its midpoint.
    pub fn midpoints(&self) -> Dataset {
        let mid = |v: &Interval| Interval::degenerate(v.midpoint());
        Dataset {
            schema: self.schema.clone(),
            dmus: self
                .dmus
                .iter()
                .map(|d| DmuRecord {
                    name: d.name.clone(),
                    inputs: d.inputs.iter().map(mid).collect(),
                    outputs: d.outputs.iter().map(mid).collect(),
                })
                .collect(),
            warnings: Vec::new(),
        }
    }

    /// A copy with one more DMU appended. Cells are in declared column order.
    pub fn with_dmu(
        &self,
        name: impl Into<String>,
        cells: Vec<Interval>,
    ) -> Result<Dataset, DatasetError> {
        let mut rows: Vec<_> = (0..self.n())
            .map(|j| (self.dmus[j].name.clone(), self.row(j)))
            .collect();
        rows.push((name.into(), cells));
        Dataset::new(self.declared_variables(), rows)
    }

    /// A copy without DMU `index`.
    pub fn without_dmu(&self, index: usize) -> Result<Dataset, DatasetError> {
        self.dmu(index)?;
        let rows = (0..self.n())
            .filter(|&j| j != index)
            .map(|j| (self.dmus[j].name.clone(), self.row(j)))
            .collect();
        Dataset::new(self.declared_variables(), rows)
    }

    pub fn declared_variables(&self) -> Vec<(String, Role)> {
        self.schema
            .iter()
            .map(|v| (v.name.clone(), v.role))
            .collect()
    }

    /// Model-facing layout with undesirable outputs moved to the input side.
    pub fn orientation(&self) -> Result<Orientation, DatasetError> {
        Orientation::of(self)
    }
}

fn build_schema(variables: Vec<(String, Role)>) -> Result<Vec<VariableSpec>, DatasetError> {
    let mut schema: Vec<VariableSpec> = Vec::with_capacity(variables.len());
    let (mut n_in, mut n_out) = (0, 0);
    for (name, role) in variables {
        if schema.iter().any(|v| v.name == name) {
            return Err(DatasetError::SchemaMismatch(format!(
                "duplicate variable '{name}'"
            )));
        }
        let index = if role.is_output() {
            n_out += 1;
            n_out - 1
        } else {
            n_in += 1;
            n_in - 1
        };
        schema.push(VariableSpec { name, role, index });
    }
    if n_in == 0 {
        return Err(DatasetError::NoInputs);
    }
    if n_out == 0 {
        return Err(DatasetError::NoOutputs);
    }
    Ok(schema)
}

/// Side of the model a variable lands on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Input,
    Output,
}

/// Position of a declared variable in the model's input or output vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub side: Side,
    pub index: usize,
}

/// Model-facing dimensions `M'`, `S'` with maps back to declared variables.
///
/// Model inputs are the declared inputs followed by the undesirable
/// outputs; model outputs are the remaining (desirable) outputs. Each list
/// keeps declared order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    /// Schema index of each model input.
    inputs: Vec<usize>,
    /// Schema index of each model output.
    outputs: Vec<usize>,
}

impl Orientation {
    pub fn of(dataset: &Dataset) -> Result<Self, DatasetError> {
        let pick = |pred: fn(Role) -> bool| -> Vec<usize> {
            dataset
                .schema
                .iter()
                .enumerate()
                .filter(|(_, v)| pred(v.role))
                .map(|(k, _)| k)
                .collect()
        };
        let mut inputs = pick(|r| r == Role::Input);
        inputs.extend(pick(|r| r == Role::UndesirableOutput));
        let outputs = pick(|r| r == Role::Output);
        if outputs.is_empty() {
            return Err(DatasetError::NoOutputsRemaining);
        }
        Ok(Orientation { inputs, outputs })
    }

    /// `M'`.
    pub fn m(&self) -> usize {
        self.inputs.len()
    }

    /// `S'`.
    pub fn s(&self) -> usize {
        self.outputs.len()
    }

    /// Schema index of model input `i`.
    pub fn input_variable(&self, i: usize) -> usize {
        self.inputs[i]
    }

    /// Schema index of model output `r`.
    pub fn output_variable(&self, r: usize) -> usize {
        self.outputs[r]
    }

    /// Model slot of the declared variable at schema index `variable`.
    pub fn locate(&self, variable: usize) -> Option<Slot> {
        if let Some(i) = self.inputs.iter().position(|&k| k == variable) {
            return Some(Slot {
                side: Side::Input,
                index: i,
            });
        }
        self.outputs
            .iter()
            .position(|&k| k == variable)
            .map(|r| Slot {
                side: Side::Output,
                index: r,
            })
    }

    pub fn is_identity(&self, dataset: &Dataset) -> bool {
        self.inputs.len() == dataset.m()
    }
}

/// Interval data laid out for the models: `x[j][i]` over model inputs,
/// `y[j][r]` over model outputs.
#[derive(Debug, Clone)]
pub struct Technology {
    orientation: Orientation,
    names: Vec<String>,
    x: Vec<Vec<Interval>>,
    y: Vec<Vec<Interval>>,
}

impl Technology {
    pub fn new(dataset: &Dataset) -> Result<Self, DatasetError> {
        let orientation = dataset.orientation()?;
        let gather = |j: usize, vars: &[usize]| -> Vec<Interval> {
            vars.iter()
                .map(|&k| dataset.cell(j, &dataset.schema[k]))
                .collect()
        };
        let x = (0..dataset.n())
            .map(|j| gather(j, &orientation.inputs))
            .collect();
        let y = (0..dataset.n())
            .map(|j| gather(j, &orientation.outputs))
            .collect();
        Ok(Technology {
            names: dataset.dmus.iter().map(|d| d.name.clone()).collect(),
            orientation,
            x,
            y,
        })
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn m(&self) -> usize {
        self.orientation.m()
    }

    pub fn s(&self) -> usize {
        self.orientation.s()
    }

    pub fn name(&self, j: usize) -> &str {
        &self.names[j]
    }

    pub fn inputs(&self, j: usize) -> &[Interval] {
        &self.x[j]
    }

    pub fn outputs(&self, j: usize) -> &[Interval] {
        &self.y[j]
    }

    pub fn check_index(&self, p: usize) -> Result<(), DatasetError> {
        if p < self.n() {
            Ok(())
        } else {
            Err(DatasetError::IndexOutOfRange {
                index: p,
                n: self.n(),
            })
        }
    }

    /// Largest endpoint over every DMU and variable.
    pub fn max_endpoint(&self) -> f64 {
        self.x
            .iter()
            .chain(&self.y)
            .flatten()
            .map(Interval::hi)
            .fold(0.0, f64::max)
    }

    /// `Σ_j weights[j] · x_j` for model input `i`.
    pub fn combine_input(&self, weights: &[f64], i: usize) -> Interval {
        (0..self.n()).map(|j| self.x[j][i].scale(weights[j])).sum()
    }

    /// `Σ_j weights[j] · y_j` for model output `r`.
    pub fn combine_output(&self, weights: &[f64], r: usize) -> Interval {
        (0..self.n()).map(|j| self.y[j][r].scale(weights[j])).sum()
    }
}
