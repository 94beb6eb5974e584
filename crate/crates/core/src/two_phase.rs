//! Two-phase interval slacks-based model.
//!
//! Phase one maximizes the normalized interval slack sum `I`. Phase two
//! fixes those slacks and exhausts what is left through endpoint residuals
//! `L`, `R`, giving the score `H` and the targets. A DMU is efficient iff
//! both scores vanish.

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Technology};
use crate::error::{solve_optimal, ModelError};
use crate::interval::Interval;
use crate::milp::{MilpProblem, MilpSolution, Relation, Sense, Var};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseOne {
    pub dmu: usize,
    /// Score `I`.
    pub score: f64,
    pub lambda: Vec<f64>,
    pub input_slacks: Vec<Interval>,
    pub output_slacks: Vec<Interval>,
}

/// Residual slacks of one coordinate: `left` reduces (inputs) or raises
/// (outputs) the upper endpoint, `right` the lower one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub left: f64,
    pub right: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoPhaseResult {
    pub phase_one: PhaseOne,
    /// Score `H`.
    pub residual_score: f64,
    pub lambda: Vec<f64>,
    pub input_residuals: Vec<Residual>,
    pub output_residuals: Vec<Residual>,
    pub input_targets: Vec<Interval>,
    pub output_targets: Vec<Interval>,
}

impl TwoPhaseResult {
    pub fn dmu(&self) -> usize {
        self.phase_one.dmu
    }

    pub fn score(&self) -> f64 {
        self.phase_one.score
    }

    pub fn is_efficient(&self) -> bool {
        self.phase_one.score <= tol::SCORE && self.residual_score <= tol::SCORE
    }
}

fn technology(dataset: &Dataset, p: usize) -> Result<Technology, ModelError> {
    let tech = Technology::new(dataset)?;
    tech.check_index(p)?;
    Ok(tech)
}

fn add_lambda(problem: &mut MilpProblem, n: usize) -> Vec<Var> {
    let lambda: Vec<Var> = (0..n)
        .map(|j| problem.add_continuous(format!("lambda_{j}"), 0.0))
        .collect();
    problem.add_constraint(lambda.iter().map(|&v| (v, 1.0)), Relation::Eq, 1.0);
    lambda
}

/// `sum_j lambda_j * endpoint(j)` terms plus one extra term.
fn row(lambda: &[Var], endpoint: impl Fn(usize) -> f64, extra: (Var, f64)) -> Vec<(Var, f64)> {
    let mut terms: Vec<(Var, f64)> = lambda
        .iter()
        .enumerate()
        .map(|(j, &v)| (v, endpoint(j)))
        .collect();
    terms.push(extra);
    terms
}

/// Endpoint pair variables `(lo, hi)` with `lo <= hi`.
fn add_pair(problem: &mut MilpProblem, name: &str, weight: f64) -> (Var, Var) {
    let lo = problem.add_continuous(format!("{name}_lo"), weight);
    let hi = problem.add_continuous(format!("{name}_hi"), weight);
    problem.add_constraint([(lo, 1.0), (hi, -1.0)], Relation::Le, 0.0);
    (lo, hi)
}

struct PhaseOneModel {
    problem: MilpProblem,
    lambda: Vec<Var>,
    sx: Vec<(Var, Var)>,
    sy: Vec<(Var, Var)>,
}

fn build_phase_one(tech: &Technology, p: usize) -> PhaseOneModel {
    let mut problem = MilpProblem::new(Sense::Maximize);
    let lambda = add_lambda(&mut problem, tech.n());
    let mut sx = Vec::new();
    for (i, obs) in tech.inputs(p).iter().enumerate() {
        let (lo, hi) = add_pair(&mut problem, &format!("sx_{i}"), 1.0 / obs.endpoint_sum());
        // sum lambda x <= x_p - s, endpoint-wise: lower against the upper slack.
        problem.add_constraint(
            row(&lambda, |j| tech.inputs(j)[i].lo(), (hi, 1.0)),
            Relation::Le,
            obs.lo(),
        );
        problem.add_constraint(
            row(&lambda, |j| tech.inputs(j)[i].hi(), (lo, 1.0)),
            Relation::Le,
            obs.hi(),
        );
        sx.push((lo, hi));
    }
    let mut sy = Vec::new();
    for (r, obs) in tech.outputs(p).iter().enumerate() {
        let (lo, hi) = add_pair(&mut problem, &format!("sy_{r}"), 1.0 / obs.endpoint_sum());
        problem.add_constraint(
            row(&lambda, |j| tech.outputs(j)[r].lo(), (lo, -1.0)),
            Relation::Ge,
            obs.lo(),
        );
        problem.add_constraint(
            row(&lambda, |j| tech.outputs(j)[r].hi(), (hi, -1.0)),
            Relation::Ge,
            obs.hi(),
        );
        sy.push((lo, hi));
    }
    PhaseOneModel {
        problem,
        lambda,
        sx,
        sy,
    }
}

/// The phase-one LP, for inspection.
pub fn build_idea(dataset: &Dataset, p: usize) -> Result<MilpProblem, ModelError> {
    Ok(build_phase_one(&technology(dataset, p)?, p).problem)
}

fn pair(sol: &MilpSolution, (lo, hi): (Var, Var)) -> Interval {
    Interval::from_solver(sol.value(lo), sol.value(hi))
}

/// Phase one: maximal normalized interval slacks.
pub fn assess_idea(dataset: &Dataset, p: usize) -> Result<PhaseOne, ModelError> {
    let tech = technology(dataset, p)?;
    let model = build_phase_one(&tech, p);
    let sol = solve_optimal(&model.problem, tech.name(p))?;
    Ok(PhaseOne {
        dmu: p,
        score: sol.objective.max(0.0),
        lambda: model.lambda.iter().map(|&v| sol.value(v)).collect(),
        input_slacks: model.sx.iter().map(|&v| pair(&sol, v)).collect(),
        output_slacks: model.sy.iter().map(|&v| pair(&sol, v)).collect(),
    })
}

struct PhaseTwoModel {
    problem: MilpProblem,
    lambda: Vec<Var>,
    rx: Vec<(Var, Var)>,
    ry: Vec<(Var, Var)>,
}

fn build_phase_two(tech: &Technology, p: usize, first: &PhaseOne) -> PhaseTwoModel {
    let mut problem = MilpProblem::new(Sense::Maximize);
    let lambda = add_lambda(&mut problem, tech.n());
    let mut rx = Vec::new();
    for (i, obs) in tech.inputs(p).iter().enumerate() {
        let w = 1.0 / obs.endpoint_sum();
        let s = first.input_slacks[i];
        let left = problem.add_continuous(format!("lx_{i}"), w);
        let right = problem.add_continuous(format!("rx_{i}"), w);
        problem.add_constraint(
            row(&lambda, |j| tech.inputs(j)[i].lo(), (right, 1.0)),
            Relation::Le,
            obs.lo() - s.hi(),
        );
        problem.add_constraint(
            row(&lambda, |j| tech.inputs(j)[i].hi(), (left, 1.0)),
            Relation::Le,
            obs.hi() - s.lo(),
        );
        rx.push((left, right));
    }
    let mut ry = Vec::new();
    for (r, obs) in tech.outputs(p).iter().enumerate() {
        let w = 1.0 / obs.endpoint_sum();
        let s = first.output_slacks[r];
        let left = problem.add_continuous(format!("ly_{r}"), w);
        let right = problem.add_continuous(format!("ry_{r}"), w);
        problem.add_constraint(
            row(&lambda, |j| tech.outputs(j)[r].lo(), (left, -1.0)),
            Relation::Ge,
            obs.lo() + s.lo(),
        );
        problem.add_constraint(
            row(&lambda, |j| tech.outputs(j)[r].hi(), (right, -1.0)),
            Relation::Ge,
            obs.hi() + s.hi(),
        );
        ry.push((left, right));
    }
    PhaseTwoModel {
        problem,
        lambda,
        rx,
        ry,
    }
}

/// Phase two on top of a phase-one result for the same DMU.
pub fn assess_idea_phase2(
    dataset: &Dataset,
    p: usize,
    first: &PhaseOne,
) -> Result<TwoPhaseResult, ModelError> {
    if first.dmu != p {
        return Err(ModelError::WrongDmu {
            expected: p,
            found: first.dmu,
        });
    }
    let tech = technology(dataset, p)?;
    let model = build_phase_two(&tech, p, first);
    let sol = solve_optimal(&model.problem, tech.name(p))?;
    let residual = |&(l, r): &(Var, Var)| Residual {
        left: sol.value(l),
        right: sol.value(r),
    };
    let input_residuals: Vec<Residual> = model.rx.iter().map(residual).collect();
    let output_residuals: Vec<Residual> = model.ry.iter().map(residual).collect();

    let input_targets = tech
        .inputs(p)
        .iter()
        .zip(&first.input_slacks)
        .zip(&input_residuals)
        .map(|((x, s), e)| {
            Interval::from_solver(x.lo() - s.hi() - e.right, x.hi() - s.lo() - e.left)
        })
        .collect();
    let output_targets = tech
        .outputs(p)
        .iter()
        .zip(&first.output_slacks)
        .zip(&output_residuals)
        .map(|((y, s), e)| {
            Interval::from_solver(y.lo() + s.lo() + e.left, y.hi() + s.hi() + e.right)
        })
        .collect();

    Ok(TwoPhaseResult {
        phase_one: first.clone(),
        residual_score: sol.objective.max(0.0),
        lambda: model.lambda.iter().map(|&v| sol.value(v)).collect(),
        input_residuals,
        output_residuals,
        input_targets,
        output_targets,
    })
}

/// Both phases for DMU `p`.
pub fn assess_two_phase(dataset: &Dataset, p: usize) -> Result<TwoPhaseResult, ModelError> {
    let first = assess_idea(dataset, p)?;
    assess_idea_phase2(dataset, p, &first)
}
