//! Small exact LP / 0-1 MILP engine.
//!
//! Problems are built with [`MilpProblem`]: every variable is either a
//! nonnegative continuous variable or a binary, and every constraint is a
//! sparse linear row with `<=`, `=` or `>=` against a constant.
//!
//! LPs are solved with a dense two-phase primal simplex using Bland's rule,
//! which keeps pivoting deterministic and cycle-free. Binaries are handled
//! by depth-first branch-and-bound in declaration order. An exhaustive
//! enumeration solver is provided as a test oracle.

mod branch;
mod simplex;

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::tol;

pub use branch::{enumerate_oracle, solve_milp, ORACLE_MAX_BINARIES};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MilpError {
    #[error("numerical breakdown in simplex: {0}")]
    NumericalBreakdown(String),
    #[error("problem has binary variables; use solve_milp")]
    HasBinaries,
    #[error("enumeration oracle supports at most {max} binaries, problem has {found}")]
    TooManyBinaries { found: usize, max: usize },
    #[error("constraint {row} references undeclared variable {var}")]
    UnknownVariable { row: usize, var: usize },
    #[error("non-finite coefficient in {0}")]
    NonFinite(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

/// Handle to a declared variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub(crate) usize);

impl Var {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub terms: Vec<(Var, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, a)| a * x[v.0]).sum()
    }

    /// Amount by which `x` violates this row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.activity(x);
        match self.relation {
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }

    /// [`violation`](Self::violation) relative to the row's magnitude: the
    /// largest of 1, `|rhs|` and any single `|a_j x_j|`.
    pub fn relative_violation(&self, x: &[f64]) -> f64 {
        let scale = self
            .terms
            .iter()
            .fold(self.rhs.abs().max(1.0), |m, &(v, a)| {
                m.max((a * x[v.0]).abs())
            });
        self.violation(x) / scale
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpProblem {
    sense: Sense,
    names: Vec<String>,
    kinds: Vec<VarKind>,
    objective: Vec<f64>,
    constraints: Vec<Constraint>,
}

impl MilpProblem {
    pub fn new(sense: Sense) -> Self {
        MilpProblem {
            sense,
            names: Vec::new(),
            kinds: Vec::new(),
            objective: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn add_continuous(&mut self, name: impl Into<String>, objective: f64) -> Var {
        self.add_var(name.into(), VarKind::Continuous, objective)
    }

    pub fn add_binary(&mut self, name: impl Into<String>, objective: f64) -> Var {
        self.add_var(name.into(), VarKind::Binary, objective)
    }

    fn add_var(&mut self, name: String, kind: VarKind, objective: f64) -> Var {
        self.names.push(name);
        self.kinds.push(kind);
        self.objective.push(objective);
        Var(self.kinds.len() - 1)
    }

    pub fn set_objective(&mut self, var: Var, coefficient: f64) {
        self.objective[var.0] = coefficient;
    }

    /// Adds a row; repeated variables in `terms` are summed.
    pub fn add_constraint(
        &mut self,
        terms: impl IntoIterator<Item = (Var, f64)>,
        relation: Relation,
        rhs: f64,
    ) {
        let mut merged: Vec<(Var, f64)> = Vec::new();
        for (v, a) in terms {
            match merged.iter_mut().find(|(w, _)| *w == v) {
                Some((_, b)) => *b += a,
                None => merged.push((v, a)),
            }
        }
        self.constraints.push(Constraint {
            terms: merged,
            relation,
            rhs,
        });
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn num_vars(&self) -> usize {
        self.kinds.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn kind(&self, var: Var) -> VarKind {
        self.kinds[var.0]
    }

    pub fn name(&self, var: Var) -> &str {
        &self.names[var.0]
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn binaries(&self) -> Vec<Var> {
        self.kinds
            .iter()
            .enumerate()
            .filter(|(_, k)| **k == VarKind::Binary)
            .map(|(i, _)| Var(i))
            .collect()
    }

    pub fn num_binaries(&self) -> usize {
        self.kinds.iter().filter(|k| **k == VarKind::Binary).count()
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest violation of any row, bound, or integrality requirement.
    /// Rows are measured relative to their magnitude, so the result is
    /// independent of the data's units.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self.constraints.iter().map(|c| c.relative_violation(x));
        let bounds = x.iter().zip(&self.kinds).map(|(&v, k)| match k {
            VarKind::Continuous => (-v).max(0.0),
            VarKind::Binary => v.abs().min((1.0 - v).abs()),
        });
        rows.chain(bounds).fold(0.0, f64::max)
    }

    pub(crate) fn validate(&self) -> Result<(), MilpError> {
        let n = self.num_vars();
        for (j, c) in self.objective.iter().enumerate() {
            if !c.is_finite() {
                return Err(MilpError::NonFinite(format!(
                    "objective of {}",
                    self.names[j]
                )));
            }
        }
        for (row, c) in self.constraints.iter().enumerate() {
            if !c.rhs.is_finite() {
                return Err(MilpError::NonFinite(format!(
                    "right-hand side of row {row}"
                )));
            }
            for &(v, a) in &c.terms {
                if v.0 >= n {
                    return Err(MilpError::UnknownVariable { row, var: v.0 });
                }
                if !a.is_finite() {
                    return Err(MilpError::NonFinite(format!("row {row}")));
                }
            }
        }
        Ok(())
    }

    /// Human-readable LP-like listing. The format is for debugging only.
    pub fn to_lp_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{}",
            match self.sense {
                Sense::Maximize => "maximize",
                Sense::Minimize => "minimize",
            }
        );
        let _ = writeln!(
            out,
            "  obj: {}",
            self.format_terms(
                self.objective
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0.0)
                    .map(|(j, c)| (Var(j), *c)),
            )
        );
        let _ = writeln!(out, "subject to");
        for (i, c) in self.constraints.iter().enumerate() {
            let _ = writeln!(
                out,
                "  r{i}: {} {} {}",
                self.format_terms(c.terms.iter().copied()),
                c.relation,
                c.rhs
            );
        }
        let _ = writeln!(out, "bounds");
        for (j, name) in self.names.iter().enumerate() {
            if self.kinds[j] == VarKind::Continuous {
                let _ = writeln!(out, "  {name} >= 0");
            }
        }
        let bins = self.binaries();
        if !bins.is_empty() {
            let _ = writeln!(out, "binary");
            for v in bins {
                let _ = writeln!(out, "  {}", self.names[v.0]);
            }
        }
        let _ = writeln!(out, "end");
        out
    }

    fn format_terms(&self, terms: impl Iterator<Item = (Var, f64)>) -> String {
        let mut s = String::new();
        for (k, (v, a)) in terms.enumerate() {
            let sign = if a < 0.0 {
                "-"
            } else if k > 0 {
                "+"
            } else {
                ""
            };
            if k > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{sign}");
            if k > 0 || a < 0.0 {
                s.push(' ');
            }
            let _ = write!(s, "{} {}", a.abs(), self.names[v.0]);
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::Unbounded => "unbounded",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpSolution {
    pub status: Status,
    /// Objective in the problem's own sense; NaN unless optimal.
    pub objective: f64,
    /// One value per declared variable; empty unless optimal.
    pub values: Vec<f64>,
}

impl MilpSolution {
    pub(crate) fn infeasible() -> Self {
        MilpSolution {
            status: Status::Infeasible,
            objective: f64::NAN,
            values: Vec::new(),
        }
    }

    pub(crate) fn unbounded() -> Self {
        MilpSolution {
            status: Status::Unbounded,
            objective: f64::NAN,
            values: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }

    pub fn value(&self, var: Var) -> f64 {
        self.values[var.0]
    }
}

/// Solves a problem without binaries.
pub fn solve_lp(problem: &MilpProblem) -> Result<MilpSolution, MilpError> {
    problem.validate()?;
    if problem.num_binaries() > 0 {
        return Err(MilpError::HasBinaries);
    }
    branch::solve_relaxation(problem, &vec![None; problem.num_vars()])
}

pub(crate) fn check_assignment(problem: &MilpProblem, x: &[f64]) -> Result<(), MilpError> {
    let worst = problem.max_violation(x);
    if worst > tol::FEASIBILITY {
        return Err(MilpError::NumericalBreakdown(format!(
            "assignment violates constraints by {worst:e}"
        )));
    }
    Ok(())
}
