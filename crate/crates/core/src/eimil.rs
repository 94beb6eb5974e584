//! One-phase enhanced inefficiency model.
//!
//! Each model coordinate (input or output, undesirable outputs counted as
//! inputs) gets a lower and an upper interval slack, `sl` and `su`, of
//! which at most one is nonzero. Complementarity is linearized with a
//! binary switch `z` and big-M bounds `sl <= L z`, `su <= R (1 - z)`.
//! The score `EI` is the normalized sum of all slack endpoints; a DMU is
//! efficient iff `EI = 0`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Technology};
use crate::error::{solve, solve_optimal, ModelError};
use crate::interval::{Interval, SlackPair};
use crate::milp::{MilpProblem, MilpSolution, Relation, Sense, Status, Var};
use crate::tol;

/// How the big-M constants are chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BigMStrategy {
    /// Inputs: the DMU's own upper endpoint. Outputs: the largest upper
    /// endpoint among the DMU's outputs, raised if needed to the largest
    /// upper endpoint of that output over the dataset.
    PerVariable,
    /// One constant: the largest upper endpoint of the DMU, raised per
    /// coordinate like `PerVariable`.
    Global,
    /// One constant: the largest endpoint anywhere in the dataset.
    DatasetMax,
    /// Per coordinate: the largest endpoint of that column over the
    /// dataset. Bounds every slack either model can need while staying on
    /// the column's own scale.
    ColumnMax,
    /// `(left, right)` per declared variable name, used as given.
    Explicit(BTreeMap<String, (f64, f64)>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BigMConfig {
    pub strategy: BigMStrategy,
    /// Multiplier applied to computed constants; ignored for `Explicit`.
    pub safety_factor: f64,
}

impl Default for BigMConfig {
    fn default() -> Self {
        BigMConfig {
            strategy: BigMStrategy::PerVariable,
            safety_factor: 2.0,
        }
    }
}

impl BigMConfig {
    pub fn new(strategy: BigMStrategy, safety_factor: f64) -> Self {
        BigMConfig {
            strategy,
            safety_factor,
        }
    }

    /// Default for the super-efficiency model.
    pub fn super_default() -> Self {
        BigMConfig {
            strategy: BigMStrategy::ColumnMax,
            safety_factor: 4.0,
        }
    }

    /// Every resolved constant multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        match &self.strategy {
            BigMStrategy::Explicit(values) => BigMConfig {
                strategy: BigMStrategy::Explicit(
                    values
                        .iter()
                        .map(|(n, &(l, r))| (n.clone(), (l * k, r * k)))
                        .collect(),
                ),
                safety_factor: self.safety_factor,
            },
            s => BigMConfig {
                strategy: s.clone(),
                safety_factor: self.safety_factor * k,
            },
        }
    }

    /// Resolves the constants for DMU `p`, in model layout.
    pub fn resolve(&self, dataset: &Dataset, p: usize) -> Result<ResolvedBigM, ModelError> {
        let tech = Technology::new(dataset)?;
        tech.check_index(p)?;
        let o = tech.orientation();
        let names = |k: usize| dataset.schema()[k].name.clone();
        let bound = |v: f64| BigM { left: v, right: v };

        if let BigMStrategy::Explicit(values) = &self.strategy {
            let lookup = |name: String| -> Result<BigM, ModelError> {
                let &(left, right) = values.get(&name).ok_or_else(|| {
                    ModelError::BigM(format!("no constants given for variable '{name}'"))
                })?;
                if !(left.is_finite() && right.is_finite() && left > 0.0 && right > 0.0) {
                    return Err(ModelError::BigM(format!(
                        "constants for '{name}' must be positive and finite, got ({left}, {right})"
                    )));
                }
                Ok(BigM { left, right })
            };
            return Ok(ResolvedBigM {
                inputs: (0..tech.m())
                    .map(|i| lookup(names(o.input_variable(i))))
                    .collect::<Result<_, _>>()?,
                outputs: (0..tech.s())
                    .map(|r| lookup(names(o.output_variable(r))))
                    .collect::<Result<_, _>>()?,
            });
        }

        if !(self.safety_factor.is_finite() && self.safety_factor >= 1.0) {
            return Err(ModelError::BigM(format!(
                "safety factor must be finite and >= 1, got {}",
                self.safety_factor
            )));
        }
        let k = self.safety_factor;
        let x_p = tech.inputs(p);
        let y_p = tech.outputs(p);
        let own_output_max = y_p.iter().map(Interval::hi).fold(0.0, f64::max);
        let own_max = x_p.iter().map(Interval::hi).fold(own_output_max, f64::max);
        // Smallest constants that never cut off a feasible slack.
        let input_floor = |i: usize| x_p[i].hi();
        let output_floor = |r: usize| {
            (0..tech.n())
                .map(|j| tech.outputs(j)[r].hi())
                .fold(0.0, f64::max)
        };
        let input_column = |i: usize| {
            (0..tech.n())
                .map(|j| tech.inputs(j)[i].hi())
                .fold(0.0, f64::max)
        };

        let (inputs, outputs): (Vec<f64>, Vec<f64>) = match self.strategy {
            BigMStrategy::PerVariable => (
                (0..tech.m()).map(input_floor).collect(),
                (0..tech.s())
                    .map(|r| own_output_max.max(output_floor(r)))
                    .collect(),
            ),
            BigMStrategy::Global => (
                (0..tech.m()).map(|i| own_max.max(input_floor(i))).collect(),
                (0..tech.s())
                    .map(|r| own_max.max(output_floor(r)))
                    .collect(),
            ),
            BigMStrategy::DatasetMax => {
                let m = tech.max_endpoint();
                (vec![m; tech.m()], vec![m; tech.s()])
            }
            BigMStrategy::ColumnMax => (
                (0..tech.m()).map(input_column).collect(),
                (0..tech.s()).map(output_floor).collect(),
            ),
            BigMStrategy::Explicit(_) => unreachable!(),
        };
        let resolved = ResolvedBigM {
            inputs: inputs.into_iter().map(|v| bound(v * k)).collect(),
            outputs: outputs.into_iter().map(|v| bound(v * k)).collect(),
        };
        if let Some(bad) = resolved
            .all()
            .find(|m| !(m.left.is_finite() && m.left > 0.0))
        {
            return Err(ModelError::BigM(format!(
                "resolved constant {} is not positive and finite",
                bad.left
            )));
        }
        Ok(resolved)
    }
}

/// Big-M pair of one coordinate: `left` bounds `sl`, `right` bounds `su`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BigM {
    pub left: f64,
    pub right: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedBigM {
    pub inputs: Vec<BigM>,
    pub outputs: Vec<BigM>,
}

impl ResolvedBigM {
    fn all(&self) -> impl Iterator<Item = &BigM> {
        self.inputs.iter().chain(&self.outputs)
    }
}

/// Result of the efficiency model for one DMU. Vectors are in model layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assessment {
    pub dmu: usize,
    /// Score `EI`.
    pub score: f64,
    pub lambda: Vec<f64>,
    pub input_slacks: Vec<SlackPair>,
    pub output_slacks: Vec<SlackPair>,
    /// `true` where the lower slack `sl` is the active side.
    pub input_switches: Vec<bool>,
    pub output_switches: Vec<bool>,
    pub input_targets: Vec<Interval>,
    pub output_targets: Vec<Interval>,
    pub big_m: ResolvedBigM,
}

impl Assessment {
    pub fn is_efficient(&self) -> bool {
        self.score <= tol::SCORE
    }
}

/// Which of the two models a [`SlackModel`] encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Variant {
    Efficiency,
    Super,
}

/// Variables of one coordinate.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CoordVars {
    pub sl: (Var, Var),
    pub su: (Var, Var),
    pub z: Var,
}

pub(crate) struct SlackModel {
    pub problem: MilpProblem,
    /// `None` for the DMU excluded from its own reference set.
    pub lambda: Vec<Option<Var>>,
    pub x: Vec<CoordVars>,
    pub y: Vec<CoordVars>,
}

pub(crate) fn build(
    tech: &Technology,
    p: usize,
    big_m: &ResolvedBigM,
    variant: Variant,
) -> SlackModel {
    let sense = match variant {
        Variant::Efficiency => Sense::Maximize,
        Variant::Super => Sense::Minimize,
    };
    let mut problem = MilpProblem::new(sense);
    let lambda: Vec<Option<Var>> = (0..tech.n())
        .map(|j| {
            (variant == Variant::Efficiency || j != p)
                .then(|| problem.add_continuous(format!("lambda_{j}"), 0.0))
        })
        .collect();

    let add_slacks = |problem: &mut MilpProblem, tag: &str, obs: Interval| {
        let w = 1.0 / obs.endpoint_sum();
        let mut v = |name: &str| problem.add_continuous(format!("{name}{tag}"), w);
        let sl = (v("sl_lo_"), v("sl_hi_"));
        let su = (v("su_lo_"), v("su_hi_"));
        (sl, su)
    };
    let x_slacks: Vec<_> = tech
        .inputs(p)
        .iter()
        .enumerate()
        .map(|(i, &obs)| add_slacks(&mut problem, &format!("x{i}"), obs))
        .collect();
    let y_slacks: Vec<_> = tech
        .outputs(p)
        .iter()
        .enumerate()
        .map(|(r, &obs)| add_slacks(&mut problem, &format!("y{r}"), obs))
        .collect();
    let zx: Vec<Var> = (0..tech.m())
        .map(|i| problem.add_binary(format!("z_x{i}"), 0.0))
        .collect();
    let zy: Vec<Var> = (0..tech.s())
        .map(|r| problem.add_binary(format!("z_y{r}"), 0.0))
        .collect();

    let reference = |endpoint: &dyn Fn(usize) -> f64| -> Vec<(Var, f64)> {
        lambda
            .iter()
            .enumerate()
            .filter_map(|(j, v)| v.map(|v| (v, endpoint(j))))
            .collect()
    };
    let with = |mut terms: Vec<(Var, f64)>, extra: [(Var, f64); 2]| {
        terms.extend(extra);
        terms
    };

    for (i, obs) in tech.inputs(p).iter().enumerate() {
        let ((sl_lo, sl_hi), (su_lo, su_hi)) = x_slacks[i];
        let lo = reference(&|j| tech.inputs(j)[i].lo());
        let hi = reference(&|j| tech.inputs(j)[i].hi());
        match variant {
            Variant::Efficiency => {
                problem.add_constraint(
                    with(lo, [(sl_lo, 1.0), (su_hi, 1.0)]),
                    Relation::Eq,
                    obs.lo(),
                );
                problem.add_constraint(
                    with(hi, [(sl_hi, 1.0), (su_lo, 1.0)]),
                    Relation::Eq,
                    obs.hi(),
                );
            }
            Variant::Super => {
                problem.add_constraint(
                    with(lo, [(sl_hi, -1.0), (su_lo, -1.0)]),
                    Relation::Le,
                    obs.lo(),
                );
                problem.add_constraint(
                    with(hi, [(sl_lo, -1.0), (su_hi, -1.0)]),
                    Relation::Le,
                    obs.hi(),
                );
            }
        }
    }
    for (r, obs) in tech.outputs(p).iter().enumerate() {
        let ((sl_lo, sl_hi), (su_lo, su_hi)) = y_slacks[r];
        let lo = reference(&|j| tech.outputs(j)[r].lo());
        let hi = reference(&|j| tech.outputs(j)[r].hi());
        match variant {
            Variant::Efficiency => {
                problem.add_constraint(
                    with(lo, [(su_hi, -1.0), (sl_lo, -1.0)]),
                    Relation::Eq,
                    obs.lo(),
                );
                problem.add_constraint(
                    with(hi, [(su_lo, -1.0), (sl_hi, -1.0)]),
                    Relation::Eq,
                    obs.hi(),
                );
            }
            Variant::Super => {
                problem.add_constraint(
                    with(lo, [(su_lo, 1.0), (sl_hi, 1.0)]),
                    Relation::Ge,
                    obs.lo(),
                );
                problem.add_constraint(
                    with(hi, [(su_hi, 1.0), (sl_lo, 1.0)]),
                    Relation::Ge,
                    obs.hi(),
                );
            }
        }
    }

    let mut coords =
        |slacks: &[((Var, Var), (Var, Var))], z: &[Var], m: &[BigM]| -> Vec<CoordVars> {
            slacks
                .iter()
                .zip(z)
                .zip(m)
                .map(|((&(sl, su), &z), m)| {
                    problem.add_constraint([(sl.0, 1.0), (sl.1, -1.0)], Relation::Le, 0.0);
                    problem.add_constraint([(su.0, 1.0), (su.1, -1.0)], Relation::Le, 0.0);
                    problem.add_constraint([(sl.1, 1.0), (z, -m.left)], Relation::Le, 0.0);
                    problem.add_constraint([(su.1, 1.0), (z, m.right)], Relation::Le, m.right);
                    CoordVars { sl, su, z }
                })
                .collect()
        };
    let x = coords(&x_slacks, &zx, &big_m.inputs);
    let y = coords(&y_slacks, &zy, &big_m.outputs);
    let sum: Vec<(Var, f64)> = lambda.iter().flatten().map(|&v| (v, 1.0)).collect();
    problem.add_constraint(sum, Relation::Eq, 1.0);

    SlackModel {
        problem,
        lambda,
        x,
        y,
    }
}

impl CoordVars {
    /// The slack pair read from a solution, with the switched-off side zeroed.
    pub(crate) fn read(&self, sol: &MilpSolution) -> (SlackPair, bool) {
        let lower_active = sol.value(self.z) > 0.5;
        let pair = |(lo, hi): (Var, Var)| Interval::from_solver(sol.value(lo), sol.value(hi));
        let (sl, su) = if lower_active {
            (pair(self.sl), Interval::ZERO)
        } else {
            (Interval::ZERO, pair(self.su))
        };
        (SlackPair { sl, su }, lower_active)
    }
}

pub(crate) fn read_lambda(lambda: &[Option<Var>], sol: &MilpSolution) -> Vec<f64> {
    lambda
        .iter()
        .map(|v| v.map_or(0.0, |v| sol.value(v)))
        .collect()
}

/// The MILP behind [`assess_eimil`], for inspection.
pub fn build_peimil(
    dataset: &Dataset,
    p: usize,
    bigm: &BigMConfig,
) -> Result<MilpProblem, ModelError> {
    let tech = Technology::new(dataset)?;
    tech.check_index(p)?;
    let big_m = bigm.resolve(dataset, p)?;
    Ok(build(&tech, p, &big_m, Variant::Efficiency).problem)
}

/// Solves the efficiency model for DMU `p`.
pub fn assess_eimil(
    dataset: &Dataset,
    p: usize,
    bigm: &BigMConfig,
) -> Result<Assessment, ModelError> {
    let tech = Technology::new(dataset)?;
    tech.check_index(p)?;
    let big_m = bigm.resolve(dataset, p)?;
    let model = build(&tech, p, &big_m, Variant::Efficiency);
    let sol = solve_optimal(&model.problem, tech.name(p))?;

    let (input_slacks, input_switches): (Vec<_>, Vec<_>) =
        model.x.iter().map(|c| c.read(&sol)).unzip();
    let (output_slacks, output_switches): (Vec<_>, Vec<_>) =
        model.y.iter().map(|c| c.read(&sol)).unzip();
    let lambda = read_lambda(&model.lambda, &sol);

    let input_targets: Vec<Interval> = tech
        .inputs(p)
        .iter()
        .zip(&input_slacks)
        .map(|(x, s)| {
            Interval::from_solver(
                x.lo() - s.su.hi() - s.sl.lo(),
                x.hi() - s.su.lo() - s.sl.hi(),
            )
        })
        .collect();
    let output_targets: Vec<Interval> = tech
        .outputs(p)
        .iter()
        .zip(&output_slacks)
        .map(|(y, s)| {
            Interval::from_solver(
                y.lo() + s.sl.lo() + s.su.hi(),
                y.hi() + s.sl.hi() + s.su.lo(),
            )
        })
        .collect();

    let mismatch = |variable: usize, from_slacks: &Interval, from_lambda: Interval| {
        let close =
            |a: f64, b: f64| (a - b).abs() <= tol::TARGET_AGREEMENT * a.abs().max(b.abs()).max(1.0);
        let agree =
            close(from_slacks.lo(), from_lambda.lo()) && close(from_slacks.hi(), from_lambda.hi());
        (!agree).then(|| ModelError::TargetMismatch {
            dmu: tech.name(p).to_string(),
            variable: dataset.schema()[variable].name.clone(),
            from_slacks: [from_slacks.lo(), from_slacks.hi()],
            from_lambda: [from_lambda.lo(), from_lambda.hi()],
        })
    };
    let o = tech.orientation();
    for (i, t) in input_targets.iter().enumerate() {
        if let Some(e) = mismatch(o.input_variable(i), t, tech.combine_input(&lambda, i)) {
            return Err(e);
        }
    }
    for (r, t) in output_targets.iter().enumerate() {
        if let Some(e) = mismatch(o.output_variable(r), t, tech.combine_output(&lambda, r)) {
            return Err(e);
        }
    }

    Ok(Assessment {
        dmu: p,
        score: sol.objective.max(0.0),
        lambda,
        input_slacks,
        output_slacks,
        input_switches,
        output_switches,
        input_targets,
        output_targets,
        big_m,
    })
}

/// [`assess_eimil`] for every DMU, in dataset order. Failures are kept per DMU.
pub fn assess_all(dataset: &Dataset, bigm: &BigMConfig) -> Vec<Result<Assessment, ModelError>> {
    (0..dataset.n())
        .map(|p| assess_eimil(dataset, p, bigm))
        .collect()
}

/// Solves a model that may legitimately be infeasible.
pub(crate) fn solve_status(
    problem: &MilpProblem,
    dmu: &str,
) -> Result<Option<MilpSolution>, ModelError> {
    let sol = solve(problem, dmu)?;
    match sol.status {
        Status::Optimal => Ok(Some(sol)),
        Status::Infeasible => Ok(None),
        Status::Unbounded => Err(ModelError::UnexpectedStatus {
            dmu: dmu.to_string(),
            status: sol.status,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{tourism_fixture, Role};
    use crate::milp::VarKind;

    #[test]
    fn problem_shape() {
        let fx = tourism_fixture();
        let problem = build_peimil(&fx, 0, &BigMConfig::default()).unwrap();
        let binaries = problem.num_binaries();
        assert_eq!(binaries, 6);
        assert_eq!(problem.num_vars(), 12 + 4 * 6 + 6);
        let continuous = (0..problem.num_vars())
            .filter(|&k| problem.kind(crate::milp::Var(k)) == VarKind::Continuous)
            .count();
        assert_eq!(continuous, 12 + 24);
    }

    #[test]
    fn degenerate_data_duplicates_rows() {
        let mid = tourism_fixture().midpoints();
        let problem = build_peimil(&mid, 2, &BigMConfig::default()).unwrap();
        let rows = problem.constraints();
        // The endpoint pair of each coordinate has identical lambda coefficients and rhs.
        for k in 0..6 {
            let (a, b) = (&rows[2 * k], &rows[2 * k + 1]);
            assert_eq!(a.rhs, b.rhs);
            assert_eq!(a.terms[..12], b.terms[..12]);
        }
    }

    #[test]
    fn attiki_big_m() {
        let fx = tourism_fixture();
        let m = BigMConfig::new(BigMStrategy::PerVariable, 1.0)
            .resolve(&fx, 0)
            .unwrap();
        assert_eq!(
            m.inputs[0],
            BigM {
                left: 77.41,
                right: 77.41
            }
        );
        let doubled = BigMConfig::default().resolve(&fx, 0).unwrap();
        assert_eq!(doubled.inputs[0].left, 2.0 * 77.41);
        // RCP is the largest own output; the dataset-wide RCP maximum is larger.
        assert_eq!(m.outputs[0].left, 29396.5);
        let g = BigMConfig::new(BigMStrategy::Global, 1.0)
            .resolve(&fx, 0)
            .unwrap();
        assert_eq!(g.inputs[0].left, 4973.99);
    }

    #[test]
    fn explicit_big_m_needs_every_variable() {
        let fx = tourism_fixture();
        let mut values: BTreeMap<String, (f64, f64)> = fx
            .schema()
            .iter()
            .map(|v| (v.name.clone(), (1e5, 1e5)))
            .collect();
        let cfg = BigMConfig::new(BigMStrategy::Explicit(values.clone()), 1.0);
        assert!(cfg.resolve(&fx, 0).is_ok());
        values.remove("GHG");
        let cfg = BigMConfig::new(BigMStrategy::Explicit(values), 1.0);
        assert!(matches!(cfg.resolve(&fx, 0), Err(ModelError::BigM(_))));
        assert!(matches!(
            BigMConfig::new(BigMStrategy::PerVariable, 0.5).resolve(&fx, 0),
            Err(ModelError::BigM(_))
        ));
    }

    #[test]
    fn attiki_is_efficient() {
        let fx = tourism_fixture();
        let a = assess_eimil(&fx, 0, &BigMConfig::default()).unwrap();
        assert!(a.score.abs() <= 1e-12, "EI = {}", a.score);
        assert!(a.is_efficient());
        assert!(a
            .input_slacks
            .iter()
            .chain(&a.output_slacks)
            .all(|s| s.is_zero(tol::TAU)));
        let tech = Technology::new(&fx).unwrap();
        for (t, x) in a
            .input_targets
            .iter()
            .chain(&a.output_targets)
            .zip(tech.inputs(0).iter().chain(tech.outputs(0)))
        {
            assert!(t.approx_eq(x, tol::TAU), "{t} vs {x}");
        }
    }

    #[test]
    fn nisia() {
        let fx = tourism_fixture();
        let a = assess_eimil(&fx, 1, &BigMConfig::default()).unwrap();
        assert!((a.score - 7.897).abs() < 0.005, "EI {}", a.score);
        let s = a.input_slacks[0];
        assert!(
            s.sl.approx_eq(&Interval::new(22.57, 66.74).unwrap(), 0.02),
            "{s:?}"
        );
        assert!(a.input_targets[0].approx_eq(&Interval::new(165.03, 175.97).unwrap(), 0.02));
        assert!((a.output_targets[0].lo() - 4604.11).abs() < 0.02);
        // GHG: zero slack, so the target stays at the observed 85.85.
        assert!(a.input_targets[1].approx_eq(&Interval::degenerate(85.85), 1e-9));
    }

    #[test]
    fn cyprus_ghg() {
        let fx = tourism_fixture();
        let a = assess_eimil(&fx, 10, &BigMConfig::default()).unwrap();
        assert!((a.score - 4.221).abs() < 0.005);
        assert!((a.input_targets[1].hi() - 41.2).abs() < 0.02);
    }

    #[test]
    fn batch_and_duplicates() {
        let fx = tourism_fixture();
        let inefficient: Vec<String> = assess_all(&fx, &BigMConfig::default())
            .into_iter()
            .map(Result::unwrap)
            .filter(|a| !a.is_efficient())
            .map(|a| fx.dmus()[a.dmu].name.clone())
            .collect();
        assert_eq!(
            inefficient,
            [
                "Nisia Aigaiou, Kriti",
                "Provence-Alpes-Côte d'Azur",
                "Cyprus"
            ]
        );

        let twin = fx.with_dmu("Attiki twin", fx.row(0)).unwrap();
        for p in [0, 12] {
            assert!(assess_eimil(&twin, p, &BigMConfig::default())
                .unwrap()
                .is_efficient());
        }

        let single = Dataset::new(
            vec![("x".into(), Role::Input), ("y".into(), Role::Output)],
            vec![(
                "a".into(),
                vec![Interval::new(1.0, 2.0).unwrap(), Interval::degenerate(3.0)],
            )],
        )
        .unwrap();
        let all = assess_all(&single, &BigMConfig::default());
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].as_ref().unwrap().score, 0.0);
    }
}
