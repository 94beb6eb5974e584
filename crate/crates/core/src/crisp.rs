//! Crisp slacks-based models: the normalized slack-sum inefficiency score
//! and its super-efficiency counterpart.
//!
//! Both run on the model orientation of the dataset, so undesirable outputs
//! count as inputs. Slack vectors are in model layout.

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Technology};
use crate::error::{solve, solve_optimal, ModelError};
use crate::milp::{MilpProblem, Relation, Sense, Status, Var};
use crate::tol;

/// Returns to scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rts {
    Crs,
    Vrs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrispAssessment {
    pub dmu: usize,
    pub rts: Rts,
    /// Inefficiency `I`, or super-inefficiency for the super model.
    pub score: f64,
    pub lambda: Vec<f64>,
    pub input_slacks: Vec<f64>,
    pub output_slacks: Vec<f64>,
}

impl CrispAssessment {
    pub fn is_efficient(&self) -> bool {
        self.score <= tol::SCORE
    }
}

struct CrispModel {
    problem: MilpProblem,
    lambda: Vec<Option<Var>>,
    sx: Vec<Var>,
    sy: Vec<Var>,
}

fn crisp_technology(dataset: &Dataset, p: usize) -> Result<Technology, ModelError> {
    if let Some(at) = dataset.first_interval_cell() {
        return Err(ModelError::NotCrisp(at));
    }
    let tech = Technology::new(dataset)?;
    tech.check_index(p)?;
    Ok(tech)
}

fn build(tech: &Technology, p: usize, rts: Rts, excluded: bool) -> CrispModel {
    let (sense, sign) = if excluded {
        (Sense::Minimize, 1.0)
    } else {
        (Sense::Maximize, -1.0)
    };
    let mut problem = MilpProblem::new(sense);
    let lambda: Vec<Option<Var>> = (0..tech.n())
        .map(|j| {
            (!(excluded && j == p)).then(|| problem.add_continuous(format!("lambda_{j}"), 0.0))
        })
        .collect();
    let x_p = tech.inputs(p);
    let y_p = tech.outputs(p);
    let sx: Vec<Var> = (0..tech.m())
        .map(|i| problem.add_continuous(format!("sx_{i}"), 1.0 / x_p[i].lo()))
        .collect();
    let sy: Vec<Var> = (0..tech.s())
        .map(|r| problem.add_continuous(format!("sy_{r}"), 1.0 / y_p[r].lo()))
        .collect();
    let active = || {
        lambda
            .iter()
            .enumerate()
            .filter_map(|(j, v)| v.map(|v| (j, v)))
    };

    // Efficiency: sum lambda x + sx <= x_p, sum lambda y - sy >= y_p.
    // Super:      sum lambda x - sx <= x_p, sum lambda y + sy >= y_p.
    for i in 0..tech.m() {
        let mut terms: Vec<(Var, f64)> =
            active().map(|(j, v)| (v, tech.inputs(j)[i].lo())).collect();
        terms.push((sx[i], -sign));
        problem.add_constraint(terms, Relation::Le, x_p[i].lo());
    }
    for r in 0..tech.s() {
        let mut terms: Vec<(Var, f64)> = active()
            .map(|(j, v)| (v, tech.outputs(j)[r].lo()))
            .collect();
        terms.push((sy[r], sign));
        problem.add_constraint(terms, Relation::Ge, y_p[r].lo());
    }
    if rts == Rts::Vrs {
        problem.add_constraint(active().map(|(_, v)| (v, 1.0)), Relation::Eq, 1.0);
    }
    CrispModel {
        problem,
        lambda,
        sx,
        sy,
    }
}

fn extract(
    model: &CrispModel,
    values: &crate::milp::MilpSolution,
    p: usize,
    rts: Rts,
) -> CrispAssessment {
    CrispAssessment {
        dmu: p,
        rts,
        score: values.objective.max(0.0),
        lambda: model
            .lambda
            .iter()
            .map(|v| v.map_or(0.0, |v| values.value(v)))
            .collect(),
        input_slacks: model.sx.iter().map(|&v| values.value(v)).collect(),
        output_slacks: model.sy.iter().map(|&v| values.value(v)).collect(),
    }
}

/// The LP behind [`assess_crisp`], for inspection.
pub fn build_crisp(dataset: &Dataset, p: usize, rts: Rts) -> Result<MilpProblem, ModelError> {
    Ok(build(&crisp_technology(dataset, p)?, p, rts, false).problem)
}

/// The LP behind [`assess_crisp_super`], for inspection.
pub fn build_crisp_super(dataset: &Dataset, p: usize, rts: Rts) -> Result<MilpProblem, ModelError> {
    Ok(build(&crisp_technology(dataset, p)?, p, rts, true).problem)
}

/// Maximizes `sum sx_i / x_ip + sum sy_r / y_rp`. Zero iff DMU `p` is efficient.
pub fn assess_crisp(dataset: &Dataset, p: usize, rts: Rts) -> Result<CrispAssessment, ModelError> {
    let tech = crisp_technology(dataset, p)?;
    let model = build(&tech, p, rts, false);
    let sol = solve_optimal(&model.problem, tech.name(p))?;
    Ok(extract(&model, &sol, p, rts))
}

/// Minimal normalized slack sum needed for the other DMUs to reach DMU `p`.
///
/// DMU `p` must be efficient under [`assess_crisp`].
pub fn assess_crisp_super(
    dataset: &Dataset,
    p: usize,
    rts: Rts,
) -> Result<CrispAssessment, ModelError> {
    let tech = crisp_technology(dataset, p)?;
    if tech.n() < 2 {
        return Err(ModelError::TooFewDmus(tech.n()));
    }
    let efficiency = assess_crisp(dataset, p, rts)?;
    if !efficiency.is_efficient() {
        return Err(ModelError::NotEfficient {
            dmu: tech.name(p).to_string(),
            score: efficiency.score,
        });
    }
    let model = build(&tech, p, rts, true);
    let sol = solve(&model.problem, tech.name(p))?;
    match sol.status {
        Status::Optimal => Ok(extract(&model, &sol, p, rts)),
        Status::Infeasible => Err(ModelError::SuperInfeasible {
            dmu: tech.name(p).to_string(),
        }),
        Status::Unbounded => Err(ModelError::UnexpectedStatus {
            dmu: tech.name(p).to_string(),
            status: sol.status,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{tourism_fixture, Role};
    use crate::interval::Interval;
    use proptest::prelude::*;

    fn crisp(rows: &[(&str, f64, f64)]) -> Dataset {
        Dataset::new(
            vec![("x".into(), Role::Input), ("y".into(), Role::Output)],
            rows.iter()
                .map(|&(n, x, y)| {
                    (
                        n.to_string(),
                        vec![Interval::degenerate(x), Interval::degenerate(y)],
                    )
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_dmu_is_efficient() {
        let ds = crisp(&[("a", 3.0, 2.0)]);
        for rts in [Rts::Crs, Rts::Vrs] {
            assert_eq!(assess_crisp(&ds, 0, rts).unwrap().score, 0.0);
        }
        assert_eq!(
            assess_crisp_super(&ds, 0, Rts::Vrs),
            Err(ModelError::TooFewDmus(1))
        );
    }

    #[test]
    fn two_dmus_by_hand() {
        let ds = crisp(&[("a", 1.0, 1.0), ("b", 2.0, 1.0)]);
        let b = assess_crisp(&ds, 1, Rts::Vrs).unwrap();
        assert!((b.score - 0.5).abs() < 1e-12);
        assert!((b.input_slacks[0] - 1.0).abs() < 1e-12);
        assert_eq!(b.lambda, vec![1.0, 0.0]);

        let a = assess_crisp_super(&ds, 0, Rts::Vrs).unwrap();
        assert!((a.score - 1.0).abs() < 1e-12);
        assert!(matches!(
            assess_crisp_super(&ds, 1, Rts::Vrs),
            Err(ModelError::NotEfficient { .. })
        ));
    }

    #[test]
    fn twins() {
        let ds = crisp(&[("a", 1.0, 1.0), ("a2", 1.0, 1.0), ("b", 2.0, 1.0)]);
        for p in 0..2 {
            assert_eq!(assess_crisp(&ds, p, Rts::Vrs).unwrap().score, 0.0);
            assert!(assess_crisp_super(&ds, p, Rts::Vrs).unwrap().score.abs() < 1e-12);
        }
    }

    #[test]
    fn interval_data_is_rejected() {
        match assess_crisp(&tourism_fixture(), 0, Rts::Vrs) {
            Err(ModelError::NotCrisp(at)) => {
                assert_eq!((at.dmu.as_str(), at.variable.as_str()), ("Attiki", "BP"))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tourism_midpoints_super() {
        let mid = tourism_fixture().midpoints();
        let attiki = assess_crisp(&mid, 0, Rts::Vrs).unwrap();
        assert!(attiki.is_efficient());
        let sup = assess_crisp_super(&mid, 0, Rts::Vrs).unwrap();
        assert!(sup.score > 0.0);
        assert!(
            (sup.score - 4.042826).abs() < 1e-6,
            "Attiki midpoint super score {}",
            sup.score
        );
    }

    fn dataset(rows: Vec<(f64, f64, f64)>) -> Dataset {
        Dataset::new(
            vec![
                ("x".into(), Role::Input),
                ("y1".into(), Role::Output),
                ("y2".into(), Role::Output),
            ],
            rows.into_iter()
                .enumerate()
                .map(|(j, (x, a, b))| {
                    (
                        format!("d{j}"),
                        vec![
                            Interval::degenerate(x),
                            Interval::degenerate(a),
                            Interval::degenerate(b),
                        ],
                    )
                })
                .collect(),
        )
        .unwrap()
    }

    proptest! {
        #[test]
        fn units_invariance(rows in prop::collection::vec((1.0f64..100.0, 1.0f64..100.0, 1.0f64..100.0), 1..7),
                            k in 0.01f64..100.0) {
            let ds = dataset(rows.clone());
            let scaled = dataset(rows.iter().map(|&(x, a, b)| (x * k, a, b / k)).collect());
            let mut any_efficient = false;
            for p in 0..ds.n() {
                for rts in [Rts::Crs, Rts::Vrs] {
                    let s0 = assess_crisp(&ds, p, rts).unwrap().score;
                    let s1 = assess_crisp(&scaled, p, rts).unwrap().score;
                    prop_assert!(s0 >= 0.0);
                    prop_assert!((s0 - s1).abs() <= 1e-7 * (1.0 + s0.abs()), "{} vs {}", s0, s1);
                    any_efficient |= rts == Rts::Vrs && s0 <= tol::SCORE;
                }
            }
            prop_assert!(any_efficient);
        }
    }
}
