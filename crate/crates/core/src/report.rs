//! Run configuration, structured reports, the human-readable table and
//! plot data. Backs the `intdea assess` command.
//!
//! Reports list variables in declared column order with their declared
//! roles; undesirable outputs are assessed on the input side and translated
//! back here.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::crisp::{
    assess_crisp, assess_crisp_super, build_crisp, build_crisp_super, CrispAssessment, Rts,
};
use crate::dataset::{
    parse_csv, Dataset, DatasetError, Orientation, Role, Side, Slot, VariableSpec,
};
use crate::eimil::{assess_eimil, build_peimil, BigMConfig, BigMStrategy, ResolvedBigM};
use crate::error::ModelError;
use crate::interval::Interval;
use crate::super_eimil::{
    assess_super, build_super_peimil, rank_assessments, SuperStatus, RANKING_CONVENTION,
};
use crate::tol;
use crate::two_phase::{assess_two_phase, build_idea};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Crisp,
    Idea,
    Eimil,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Crisp => "crisp",
            ModelKind::Idea => "idea",
            ModelKind::Eimil => "eimil",
        }
    }
}

/// Big-M choice on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BigMChoice {
    PerVariable,
    Global,
    /// CSV file with rows `variable,left,right`.
    File(PathBuf),
}

impl std::str::FromStr for BigMChoice {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "per_variable" => BigMChoice::PerVariable,
            "global" => BigMChoice::Global,
            path => BigMChoice::File(PathBuf::from(path)),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub data: PathBuf,
    pub schema: PathBuf,
    pub model: ModelKind,
    pub super_efficiency: bool,
    pub bigm: Option<BigMChoice>,
    pub out: Option<PathBuf>,
    pub plot_data: Option<PathBuf>,
    pub dump_lp: Option<PathBuf>,
}

/// Model settings independent of files.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelOptions {
    pub model: ModelKind,
    pub super_efficiency: bool,
    pub bigm: BigMConfig,
    pub super_bigm: BigMConfig,
}

impl ModelOptions {
    pub fn new(model: ModelKind, super_efficiency: bool) -> Self {
        ModelOptions {
            model,
            super_efficiency,
            bigm: BigMConfig::default(),
            super_bigm: BigMConfig::super_default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Solver(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl RunError {
    /// Process exit status: 1 for bad input, 2 for solver failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Validation(_) | RunError::Io { .. } => 1,
            RunError::Solver(_) => 2,
        }
    }
}

impl From<ModelError> for RunError {
    fn from(e: ModelError) -> Self {
        if e.is_solver_failure() {
            RunError::Solver(e.to_string())
        } else {
            RunError::Validation(e.to_string())
        }
    }
}

impl From<DatasetError> for RunError {
    fn from(e: DatasetError) -> Self {
        RunError::Validation(e.to_string())
    }
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub metadata: Metadata,
    pub dmus: Vec<DmuReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub model: ModelKind,
    pub super_efficiency: bool,
    pub returns_to_scale: Rts,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub big_m: Option<BigMMetadata>,
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranking_convention: Option<String>,
    pub variables: Vec<VariableSpec>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BigMMetadata {
    pub efficiency: BigMConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub super_efficiency: Option<BigMConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub interval: f64,
    pub feasibility: f64,
    pub optimality: f64,
    pub score: f64,
    pub target_agreement: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            interval: tol::TAU,
            feasibility: tol::FEASIBILITY,
            optimality: tol::OPTIMALITY,
            score: tol::SCORE,
            target_agreement: tol::TARGET_AGREEMENT,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    /// One-phase inefficiency `EI`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ei: Option<f64>,
    /// Crisp or phase-one inefficiency `I`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<f64>,
    /// Phase-two residual score `H`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    /// Super-inefficiency (`SEI`, or the crisp super score).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sei: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub super_status: Option<SuperStatus>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmuReport {
    pub index: usize,
    pub name: String,
    pub efficient: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    pub scores: Scores,
    pub lambda: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub super_lambda: Option<Vec<f64>>,
    pub variables: Vec<VariableReport>,
}

/// One declared variable of one DMU. Which slack fields are present
/// depends on the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableReport {
    pub name: String,
    pub role: Role,
    pub observed: Interval,
    pub target: Interval,
    /// Crisp slack or phase-one interval slack.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<Interval>,
    /// Phase-two residuals `[left, right]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sl: Option<Interval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub su: Option<Interval>,
    /// Big-M constants `[left, right]` of the efficiency model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub big_m: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub super_sl: Option<Interval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub super_su: Option<Interval>,
}

impl VariableReport {
    fn new(spec: &VariableSpec, observed: Interval, target: Interval) -> Self {
        VariableReport {
            name: spec.name.clone(),
            role: spec.role,
            observed,
            target,
            slack: None,
            residual: None,
            sl: None,
            su: None,
            big_m: None,
            super_sl: None,
            super_su: None,
        }
    }
}

/// Model-layout slot of every declared variable.
fn slots(dataset: &Dataset, o: &Orientation) -> Vec<Slot> {
    (0..dataset.schema().len())
        .map(|k| o.locate(k).expect("every variable has a model slot"))
        .collect()
}

fn pick<T: Copy>(slot: Slot, inputs: &[T], outputs: &[T]) -> T {
    match slot.side {
        Side::Input => inputs[slot.index],
        Side::Output => outputs[slot.index],
    }
}

fn big_m_pair(m: &ResolvedBigM, slot: Slot) -> [f64; 2] {
    let b = pick(slot, &m.inputs, &m.outputs);
    [b.left, b.right]
}

/// Runs the selected model over every DMU and assembles the report.
pub fn build_report(dataset: &Dataset, options: &ModelOptions) -> Result<Report, ModelError> {
    let orientation = dataset.orientation()?;
    let slots = slots(dataset, &orientation);
    let super_on = options.super_efficiency && dataset.n() >= 2;
    let dmus = match options.model {
        ModelKind::Eimil => eimil_rows(dataset, options, &slots, super_on)?,
        ModelKind::Idea => idea_rows(dataset, &slots)?,
        ModelKind::Crisp => crisp_rows(dataset, &slots, super_on)?,
    };
    let big_m = (options.model == ModelKind::Eimil).then(|| BigMMetadata {
        efficiency: options.bigm.clone(),
        super_efficiency: super_on.then(|| options.super_bigm.clone()),
    });
    Ok(Report {
        schema_version: REPORT_SCHEMA_VERSION,
        metadata: Metadata {
            model: options.model,
            super_efficiency: options.super_efficiency,
            returns_to_scale: Rts::Vrs,
            big_m,
            tolerances: Tolerances::default(),
            ranking_convention: super_on.then(|| RANKING_CONVENTION.to_string()),
            variables: dataset.schema().to_vec(),
            warnings: dataset.warnings().to_vec(),
        },
        dmus,
    })
}

fn eimil_rows(
    dataset: &Dataset,
    options: &ModelOptions,
    slots: &[Slot],
    super_on: bool,
) -> Result<Vec<DmuReport>, ModelError> {
    let assessments = (0..dataset.n())
        .map(|p| assess_eimil(dataset, p, &options.bigm))
        .collect::<Result<Vec<_>, _>>()?;
    let supers = if super_on {
        assessments
            .iter()
            .map(|a| {
                a.is_efficient()
                    .then(|| assess_super(dataset, a, &options.super_bigm))
                    .transpose()
            })
            .collect::<Result<Vec<_>, _>>()?
    } else {
        vec![None; dataset.n()]
    };
    let ranking = super_on.then(|| rank_assessments(dataset, &assessments, &supers));

    Ok(assessments
        .iter()
        .zip(&supers)
        .map(|(a, sup)| {
            let p = a.dmu;
            let solution = sup.as_ref().and_then(|s| s.solution.as_ref());
            let variables = dataset
                .schema()
                .iter()
                .zip(slots)
                .map(|(spec, &slot)| {
                    let slack = pick(slot, &a.input_slacks, &a.output_slacks);
                    let mut v = VariableReport::new(
                        spec,
                        dataset.cell(p, spec),
                        pick(slot, &a.input_targets, &a.output_targets),
                    );
                    v.sl = Some(slack.sl);
                    v.su = Some(slack.su);
                    v.big_m = Some(big_m_pair(&a.big_m, slot));
                    if let Some(s) = solution {
                        let pair = pick(slot, &s.input_slacks, &s.output_slacks);
                        v.super_sl = Some(pair.sl);
                        v.super_su = Some(pair.su);
                    }
                    v
                })
                .collect();
            DmuReport {
                index: p,
                name: dataset.dmus()[p].name.clone(),
                efficient: a.is_efficient(),
                rank: ranking.as_ref().and_then(|r| r.rank_of(p)),
                scores: Scores {
                    ei: Some(a.score),
                    sei: sup.as_ref().and_then(|s| s.score()),
                    super_status: sup.as_ref().map(|s| s.status()),
                    ..Scores::default()
                },
                lambda: a.lambda.clone(),
                super_lambda: solution.map(|s| s.lambda.clone()),
                variables,
            }
        })
        .collect())
}

fn idea_rows(dataset: &Dataset, slots: &[Slot]) -> Result<Vec<DmuReport>, ModelError> {
    (0..dataset.n())
        .map(|p| {
            let res = assess_two_phase(dataset, p)?;
            let first = &res.phase_one;
            let variables = dataset
                .schema()
                .iter()
                .zip(slots)
                .map(|(spec, &slot)| {
                    let target = pick(slot, &res.input_targets, &res.output_targets);
                    let mut v = VariableReport::new(spec, dataset.cell(p, spec), target);
                    v.slack = Some(pick(slot, &first.input_slacks, &first.output_slacks));
                    let e = pick(slot, &res.input_residuals, &res.output_residuals);
                    v.residual = Some([e.left, e.right]);
                    v
                })
                .collect();
            Ok(DmuReport {
                index: p,
                name: dataset.dmus()[p].name.clone(),
                efficient: res.is_efficient(),
                rank: None,
                scores: Scores {
                    i: Some(res.score()),
                    h: Some(res.residual_score),
                    ..Scores::default()
                },
                lambda: res.lambda.clone(),
                super_lambda: None,
                variables,
            })
        })
        .collect()
}

fn crisp_rows(
    dataset: &Dataset,
    slots: &[Slot],
    super_on: bool,
) -> Result<Vec<DmuReport>, ModelError> {
    let results = (0..dataset.n())
        .map(|p| assess_crisp(dataset, p, Rts::Vrs))
        .collect::<Result<Vec<_>, _>>()?;
    // Outer `None`: no super model run. Inner `None`: super model infeasible.
    let mut super_results: Vec<Option<Option<CrispAssessment>>> = Vec::with_capacity(dataset.n());
    for a in &results {
        super_results.push(if super_on && a.is_efficient() {
            match assess_crisp_super(dataset, a.dmu, Rts::Vrs) {
                Ok(s) => Some(Some(s)),
                Err(ModelError::SuperInfeasible { .. }) => Some(None),
                Err(e) => return Err(e),
            }
        } else {
            None
        });
    }
    let super_scores: Vec<Option<Option<f64>>> = super_results
        .iter()
        .map(|s| s.as_ref().map(|s| s.as_ref().map(|s| s.score)))
        .collect();
    let ranks = super_on.then(|| {
        let names: Vec<&str> = dataset.dmus().iter().map(|d| d.name.as_str()).collect();
        let rows: Vec<_> = results
            .iter()
            .zip(&super_scores)
            .map(|(a, s)| (a.is_efficient(), a.score, *s))
            .collect();
        crate::super_eimil::ranks(&names, &rows)
    });

    Ok(results
        .iter()
        .enumerate()
        .map(|(p, a)| {
            let variables = dataset
                .schema()
                .iter()
                .zip(slots)
                .map(|(spec, &slot)| {
                    let observed = dataset.cell(p, spec);
                    let s = pick(slot, &a.input_slacks, &a.output_slacks);
                    let target = match slot.side {
                        Side::Input => observed.lo() - s,
                        Side::Output => observed.lo() + s,
                    };
                    let mut v = VariableReport::new(spec, observed, Interval::degenerate(target));
                    v.slack = Some(Interval::degenerate(s));
                    v
                })
                .collect();
            DmuReport {
                index: p,
                name: dataset.dmus()[p].name.clone(),
                efficient: a.is_efficient(),
                rank: ranks.as_ref().map(|r| r[p]),
                scores: Scores {
                    i: Some(a.score),
                    sei: super_scores[p].flatten(),
                    super_status: super_scores[p].map(|s| match s {
                        Some(_) => SuperStatus::Scored,
                        None => SuperStatus::Infeasible,
                    }),
                    ..Scores::default()
                },
                lambda: a.lambda.clone(),
                super_lambda: super_results[p]
                    .as_ref()
                    .and_then(|s| s.as_ref())
                    .map(|s| s.lambda.clone()),
                variables,
            }
        })
        .collect())
}

fn fmt3(v: f64) -> String {
    format!("{v:.3}")
}

/// Aligned table with three decimals, one row per DMU in dataset order.
pub fn render_table(report: &Report) -> String {
    let sup = report.metadata.super_efficiency;
    let mut header = vec!["DMU".to_string()];
    match report.metadata.model {
        ModelKind::Eimil => header.push("EI".into()),
        ModelKind::Idea => header.extend(["I".into(), "H".into()]),
        ModelKind::Crisp => header.push("I".into()),
    }
    let ranked = sup && report.metadata.model != ModelKind::Idea;
    if ranked {
        header.extend(["SEI".into(), "Rank".into()]);
    }
    header.push("Class".into());

    let mut rows = vec![header];
    for d in &report.dmus {
        let mut row = vec![d.name.clone()];
        let s = &d.scores;
        match report.metadata.model {
            ModelKind::Eimil => row.push(s.ei.map_or("--".into(), fmt3)),
            ModelKind::Idea => {
                row.push(s.i.map_or("--".into(), fmt3));
                row.push(s.h.map_or("--".into(), fmt3));
            }
            ModelKind::Crisp => row.push(s.i.map_or("--".into(), fmt3)),
        }
        if ranked {
            row.push(match (s.super_status, s.sei) {
                (Some(SuperStatus::Infeasible), _) => "infeasible".into(),
                (_, Some(v)) => fmt3(v),
                _ => "--".into(),
            });
            row.push(d.rank.map_or("--".into(), |r| r.to_string()));
        }
        row.push(
            if d.efficient {
                "efficient"
            } else {
                "inefficient"
            }
            .into(),
        );
        rows.push(row);
    }

    let cols = rows[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            let pad = widths[c] - cell.chars().count();
            if c > 0 {
                line.push_str("  ");
            }
            if c == 0 || c == cols - 1 {
                line.push_str(cell);
                line.extend(std::iter::repeat_n(' ', pad));
            } else {
                line.extend(std::iter::repeat_n(' ', pad));
                line.push_str(cell);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// File-name slug of a DMU name.
pub fn slug(name: &str) -> String {
    let mut out = String::new();
    for ch in name.chars().flat_map(char::to_lowercase) {
        if ch.is_alphanumeric() {
            out.push(ch);
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}

/// File name used for per-DMU outputs: one-based index and slug.
pub fn dmu_file_stem(index: usize, name: &str) -> String {
    format!("{:02}_{}", index + 1, slug(name))
}

fn ratio(target: f64, observed: f64) -> String {
    if observed == 0.0 {
        String::new()
    } else {
        format!("{}", target / observed)
    }
}

/// Plot-data CSV for one DMU: observed and target endpoints and their
/// ratios, one row per declared variable.
pub fn plot_csv(dmu: &DmuReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "variable",
        "role",
        "observed_lo",
        "observed_hi",
        "target_lo",
        "target_hi",
        "ratio_lo",
        "ratio_hi",
    ])
    .expect("write to memory");
    for v in &dmu.variables {
        let (o, t) = (v.observed, v.target);
        w.write_record([
            v.name.clone(),
            v.role.to_string(),
            o.lo().to_string(),
            o.hi().to_string(),
            t.lo().to_string(),
            t.hi().to_string(),
            ratio(t.lo(), o.lo()),
            ratio(t.hi(), o.hi()),
        ])
        .expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 names")
}

/// Writes one plot-data file per inefficient DMU into `dir`.
pub fn emit_plot_data(report: &Report, dir: &Path) -> Result<Vec<PathBuf>, RunError> {
    fs::create_dir_all(dir).map_err(io_error(dir))?;
    let mut written = Vec::new();
    for d in report.dmus.iter().filter(|d| !d.efficient) {
        let path = dir.join(format!("{}.csv", dmu_file_stem(d.index, &d.name)));
        fs::write(&path, plot_csv(d)).map_err(io_error(&path))?;
        written.push(path);
    }
    Ok(written)
}

/// Writes the model of every DMU (and its super model when requested) in
/// LP text form.
pub fn dump_lp(
    dataset: &Dataset,
    options: &ModelOptions,
    dir: &Path,
) -> Result<Vec<PathBuf>, RunError> {
    fs::create_dir_all(dir).map_err(io_error(dir))?;
    let mut written = Vec::new();
    let mut write = |stem: String, text: String| -> Result<(), RunError> {
        let path = dir.join(format!("{stem}.lp"));
        fs::write(&path, text).map_err(io_error(&path))?;
        written.push(path);
        Ok(())
    };
    for p in 0..dataset.n() {
        let stem = dmu_file_stem(p, &dataset.dmus()[p].name);
        let problem = match options.model {
            ModelKind::Eimil => build_peimil(dataset, p, &options.bigm)?,
            ModelKind::Idea => build_idea(dataset, p)?,
            ModelKind::Crisp => build_crisp(dataset, p, Rts::Vrs)?,
        };
        write(stem.clone(), problem.to_lp_string())?;
        if options.super_efficiency && dataset.n() >= 2 {
            let sup = match options.model {
                ModelKind::Eimil => Some(build_super_peimil(dataset, p, &options.super_bigm)?),
                ModelKind::Crisp => Some(build_crisp_super(dataset, p, Rts::Vrs)?),
                ModelKind::Idea => None,
            };
            if let Some(sup) = sup {
                write(format!("{stem}_super"), sup.to_lp_string())?;
            }
        }
    }
    Ok(written)
}

/// Reads a big-M file: rows `variable,left,right`, optional header.
pub fn parse_bigm_csv(text: &str) -> Result<BTreeMap<String, (f64, f64)>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = BTreeMap::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 3 {
            return Err(format!("line {line}: expected variable,left,right"));
        }
        if k == 0 && &record[0] == "variable" {
            continue;
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| format!("line {line}: '{s}' is not a number"))
        };
        out.insert(record[0].to_string(), (num(&record[1])?, num(&record[2])?));
    }
    Ok(out)
}

fn read(path: &Path) -> Result<String, RunError> {
    fs::read_to_string(path).map_err(io_error(path))
}

/// Resolves the model options of a run, reading the big-M file if any.
pub fn model_options(config: &RunConfig) -> Result<ModelOptions, RunError> {
    if config.super_efficiency && config.model == ModelKind::Idea {
        return Err(RunError::Validation(
            "--super requires --model eimil or crisp".into(),
        ));
    }
    let mut options = ModelOptions::new(config.model, config.super_efficiency);
    match &config.bigm {
        None | Some(BigMChoice::PerVariable) => {}
        Some(BigMChoice::Global) => options.bigm.strategy = BigMStrategy::Global,
        Some(BigMChoice::File(path)) => {
            let values = parse_bigm_csv(&read(path)?)
                .map_err(|e| RunError::Validation(format!("{}: {e}", path.display())))?;
            options.bigm = BigMConfig::new(BigMStrategy::Explicit(values.clone()), 1.0);
            options.super_bigm = BigMConfig::new(BigMStrategy::Explicit(values), 1.0);
        }
    }
    Ok(options)
}

pub fn report_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Runs an assessment end to end. The table goes to `stdout`, followed by
/// the JSON report unless `--out` names a file. Ingestion warnings go to
/// `stderr`.
pub fn run(
    config: &RunConfig,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<Report, RunError> {
    let options = model_options(config)?;
    let dataset = parse_csv(&read(&config.data)?, &read(&config.schema)?)
        .map_err(|e| RunError::Validation(format!("{}: {e}", config.data.display())))?;
    if options.model == ModelKind::Crisp {
        if let Some(at) = dataset.first_interval_cell() {
            return Err(ModelError::NotCrisp(at).into());
        }
    }
    if let Some(dir) = &config.dump_lp {
        dump_lp(&dataset, &options, dir)?;
    }
    let report = build_report(&dataset, &options)?;
    let json = report_json(&report);

    let console = |e: io::Error| RunError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    };
    for w in dataset.warnings() {
        writeln!(stderr, "warning: {w}").map_err(console)?;
    }
    stdout
        .write_all(render_table(&report).as_bytes())
        .map_err(console)?;
    match &config.out {
        Some(path) => fs::write(path, &json).map_err(io_error(path))?,
        None => {
            stdout.write_all(b"\n").map_err(console)?;
            stdout.write_all(json.as_bytes()).map_err(console)?;
        }
    }
    if let Some(dir) = &config.plot_data {
        emit_plot_data(&report, dir)?;
    }
    Ok(report)
}
