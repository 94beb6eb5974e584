use super::simplex::{solve_dense, DenseLp, DenseRow, LpOutcome};
use super::{
    check_assignment, MilpError, MilpProblem, MilpSolution, Relation, Sense, Status, VarKind,
};
use crate::tol;

/// Enumeration cap of [`enumerate_oracle`].
pub const ORACLE_MAX_BINARIES: usize = 20;

/// A binary within this distance of 0 or 1 counts as integral.
const INTEGRALITY: f64 = 1e-9;
/// Nodes whose bound does not beat the incumbent by more than this are pruned.
const PRUNE: f64 = 1e-9;

/// Solves the LP obtained by fixing the `Some` entries of `fixed` and
/// relaxing every remaining binary to `[0, 1]`.
pub(crate) fn solve_relaxation(
    problem: &MilpProblem,
    fixed: &[Option<f64>],
) -> Result<MilpSolution, MilpError> {
    let free: Vec<usize> = (0..problem.num_vars())
        .filter(|&j| fixed[j].is_none())
        .collect();
    let mut column = vec![usize::MAX; problem.num_vars()];
    for (c, &j) in free.iter().enumerate() {
        column[j] = c;
    }
    let sign = match problem.sense() {
        Sense::Maximize => 1.0,
        Sense::Minimize => -1.0,
    };
    let objective = free
        .iter()
        .map(|&j| sign * problem.objective()[j])
        .collect();

    let mut rows = Vec::with_capacity(problem.num_constraints() + free.len());
    for c in problem.constraints() {
        let mut coeffs = vec![0.0; free.len()];
        let mut rhs = c.rhs;
        let mut empty = true;
        for &(v, a) in &c.terms {
            match fixed[v.0] {
                Some(val) => rhs -= a * val,
                None => {
                    coeffs[column[v.0]] += a;
                    empty = empty && a == 0.0;
                }
            }
        }
        if empty {
            let violated = match c.relation {
                Relation::Le => rhs < -tol::FEASIBILITY,
                Relation::Ge => rhs > tol::FEASIBILITY,
                Relation::Eq => rhs.abs() > tol::FEASIBILITY,
            };
            if violated {
                return Ok(MilpSolution::infeasible());
            }
            continue;
        }
        rows.push(DenseRow {
            coeffs,
            relation: c.relation,
            rhs,
        });
    }
    for (c, &j) in free.iter().enumerate() {
        if problem.kinds[j] == VarKind::Binary {
            let mut coeffs = vec![0.0; free.len()];
            coeffs[c] = 1.0;
            rows.push(DenseRow {
                coeffs,
                relation: Relation::Le,
                rhs: 1.0,
            });
        }
    }

    match solve_dense(&DenseLp { objective, rows })? {
        LpOutcome::Infeasible => Ok(MilpSolution::infeasible()),
        LpOutcome::Unbounded => Ok(MilpSolution::unbounded()),
        LpOutcome::Optimal(x) => {
            let mut values = vec![0.0; problem.num_vars()];
            for j in 0..problem.num_vars() {
                values[j] = match fixed[j] {
                    Some(v) => v,
                    None => x[column[j]],
                };
            }
            Ok(MilpSolution {
                status: Status::Optimal,
                objective: problem.objective_value(&values),
                values,
            })
        }
    }
}

fn internal_value(problem: &MilpProblem, objective: f64) -> f64 {
    match problem.sense() {
        Sense::Maximize => objective,
        Sense::Minimize => -objective,
    }
}

/// Depth-first branch-and-bound over the binaries.
///
/// At each node the first fractional binary in declaration order is
/// branched on, the 0-branch explored first. Nodes are pruned by their LP
/// relaxation bound. Integral relaxations are re-solved with every binary
/// fixed so the returned binaries are exactly 0 or 1.
pub fn solve_milp(problem: &MilpProblem) -> Result<MilpSolution, MilpError> {
    problem.validate()?;
    let binaries = problem.binaries();
    if binaries.is_empty() {
        let sol = solve_relaxation(problem, &vec![None; problem.num_vars()])?;
        if sol.is_optimal() {
            check_assignment(problem, &sol.values)?;
        }
        return Ok(sol);
    }

    let mut incumbent: Option<(f64, MilpSolution)> = None;
    let mut stack: Vec<Vec<Option<f64>>> = vec![vec![None; problem.num_vars()]];

    while let Some(node) = stack.pop() {
        let relax = solve_relaxation(problem, &node)?;
        match relax.status {
            Status::Infeasible => continue,
            Status::Unbounded => {
                // Only an unbounded LP with every binary fixed proves the
                // MILP unbounded; otherwise keep splitting.
                match binaries.iter().find(|b| node[b.0].is_none()) {
                    None => return Ok(MilpSolution::unbounded()),
                    Some(b) => push_children(&mut stack, &node, b.0),
                }
                continue;
            }
            Status::Optimal => {}
        }
        let bound = internal_value(problem, relax.objective);
        if let Some((best, _)) = &incumbent {
            if bound <= best + PRUNE {
                continue;
            }
        }
        let fractional = binaries.iter().find(|b| {
            let v = relax.values[b.0];
            node[b.0].is_none() && v.min(1.0 - v).abs() > INTEGRALITY
        });
        match fractional {
            Some(b) => push_children(&mut stack, &node, b.0),
            None => {
                let mut leaf = node.clone();
                for b in &binaries {
                    leaf[b.0] = Some(relax.values[b.0].round());
                }
                let sol = if leaf == node {
                    relax
                } else {
                    solve_relaxation(problem, &leaf)?
                };
                if sol.is_optimal() {
                    let value = internal_value(problem, sol.objective);
                    if incumbent.as_ref().is_none_or(|(best, _)| value > *best) {
                        incumbent = Some((value, sol));
                    }
                }
            }
        }
    }

    match incumbent {
        Some((_, sol)) => {
            check_assignment(problem, &sol.values)?;
            Ok(sol)
        }
        None => Ok(MilpSolution::infeasible()),
    }
}

fn push_children(stack: &mut Vec<Vec<Option<f64>>>, node: &[Option<f64>], var: usize) {
    for value in [1.0, 0.0] {
        let mut child = node.to_vec();
        child[var] = Some(value);
        stack.push(child);
    }
}

/// Solves the LP for every 0-1 assignment of the binaries and keeps the best.
///
/// Exponential; meant as a reference for testing [`solve_milp`].
pub fn enumerate_oracle(problem: &MilpProblem) -> Result<MilpSolution, MilpError> {
    problem.validate()?;
    let binaries = problem.binaries();
    if binaries.len() > ORACLE_MAX_BINARIES {
        return Err(MilpError::TooManyBinaries {
            found: binaries.len(),
            max: ORACLE_MAX_BINARIES,
        });
    }
    let mut best: Option<(f64, MilpSolution)> = None;
    for mask in 0u32..(1u32 << binaries.len()) {
        let mut fixed = vec![None; problem.num_vars()];
        for (k, b) in binaries.iter().enumerate() {
            fixed[b.0] = Some(f64::from((mask >> k) & 1));
        }
        let sol = solve_relaxation(problem, &fixed)?;
        match sol.status {
            Status::Unbounded => return Ok(sol),
            Status::Infeasible => {}
            Status::Optimal => {
                let value = internal_value(problem, sol.objective);
                if best.as_ref().is_none_or(|(b, _)| value > *b) {
                    best = Some((value, sol));
                }
            }
        }
    }
    Ok(best.map_or_else(MilpSolution::infeasible, |(_, s)| s))
}

#[cfg(test)]
mod tests {
    use super::super::solve_lp;
    use super::*;

    #[test]
    fn lp_with_single_bound() {
        let mut p = MilpProblem::new(Sense::Maximize);
        let x = p.add_continuous("x", 1.0);
        p.add_constraint([(x, 1.0)], Relation::Le, 1.0);
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert_eq!(s.objective, 1.0);
    }

    #[test]
    fn lp_infeasible() {
        let mut p = MilpProblem::new(Sense::Maximize);
        let x = p.add_continuous("x", 1.0);
        p.add_constraint([(x, 1.0)], Relation::Ge, 2.0);
        p.add_constraint([(x, 1.0)], Relation::Le, 1.0);
        assert_eq!(solve_lp(&p).unwrap().status, Status::Infeasible);
    }

    #[test]
    fn milp_link_to_binary() {
        let mut p = MilpProblem::new(Sense::Maximize);
        let y = p.add_continuous("y", 1.0);
        let z = p.add_binary("z", 0.0);
        p.add_constraint([(y, 1.0), (z, -10.0)], Relation::Le, 0.0);
        p.add_constraint([(y, 1.0)], Relation::Le, 7.0);
        let s = solve_milp(&p).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert!((s.objective - 7.0).abs() < 1e-12);
        assert_eq!(s.value(z), 1.0);
        assert_eq!(enumerate_oracle(&p).unwrap().objective, s.objective);
    }

    #[test]
    fn milp_without_binaries_matches_lp() {
        let mut p = MilpProblem::new(Sense::Minimize);
        let a = p.add_continuous("a", 2.0);
        let b = p.add_continuous("b", 3.0);
        p.add_constraint([(a, 1.0), (b, 1.0)], Relation::Ge, 4.0);
        p.add_constraint([(a, 1.0)], Relation::Le, 3.0);
        let lp = solve_lp(&p).unwrap();
        assert_eq!(solve_milp(&p).unwrap(), lp);
        assert_eq!(enumerate_oracle(&p).unwrap(), lp);
        assert!((lp.objective - 9.0).abs() < 1e-12);
    }

    #[test]
    fn all_fixings_infeasible() {
        let mut p = MilpProblem::new(Sense::Maximize);
        let y = p.add_continuous("y", 1.0);
        let z = p.add_binary("z", 0.0);
        // z = 0.5 is the only way to satisfy both rows.
        p.add_constraint([(y, 1.0), (z, 2.0)], Relation::Eq, 1.0);
        p.add_constraint([(y, 1.0)], Relation::Eq, 0.0);
        assert_eq!(enumerate_oracle(&p).unwrap().status, Status::Infeasible);
        assert_eq!(solve_milp(&p).unwrap().status, Status::Infeasible);
    }

    #[test]
    fn oracle_cap() {
        let mut p = MilpProblem::new(Sense::Maximize);
        for k in 0..=ORACLE_MAX_BINARIES {
            p.add_binary(format!("z{k}"), 1.0);
        }
        assert!(matches!(
            enumerate_oracle(&p),
            Err(MilpError::TooManyBinaries { .. })
        ));
    }

    #[test]
    fn unbounded_requires_an_integer_point() {
        // z is forced to 1 and y is unbounded above.
        let mut p = MilpProblem::new(Sense::Maximize);
        let y = p.add_continuous("y", 1.0);
        let z = p.add_binary("z", 0.0);
        p.add_constraint([(z, 1.0)], Relation::Ge, 0.5);
        p.add_constraint([(y, 1.0), (z, -1.0)], Relation::Ge, -10.0);
        assert_eq!(enumerate_oracle(&p).unwrap().status, Status::Unbounded);
        assert_eq!(solve_milp(&p).unwrap().status, Status::Unbounded);

        // Relaxation unbounded, yet no 0-1 value of z fits in [0.3, 0.7].
        let mut p = MilpProblem::new(Sense::Maximize);
        let _y = p.add_continuous("y", 1.0);
        let z = p.add_binary("z", 0.0);
        p.add_constraint([(z, 1.0)], Relation::Ge, 0.3);
        p.add_constraint([(z, 1.0)], Relation::Le, 0.7);
        assert_eq!(enumerate_oracle(&p).unwrap().status, Status::Infeasible);
        assert_eq!(solve_milp(&p).unwrap().status, Status::Infeasible);
    }
}
