mod common;

use intdea::milp::{enumerate_oracle, solve_lp, solve_milp, MilpProblem, Relation, Sense, Status};
use rand::Rng;

/// Brute-force optimum of `max c.x` over `A x <= b, x >= 0` in two
/// variables: try every intersection of two boundary lines.
fn vertex_oracle(c: [f64; 2], rows: &[([f64; 2], f64)]) -> Option<(f64, [f64; 2])> {
    let mut lines: Vec<([f64; 2], f64)> = rows.to_vec();
    lines.push(([1.0, 0.0], 0.0));
    lines.push(([0.0, 1.0], 0.0));
    let feasible = |x: [f64; 2]| {
        x[0] >= -1e-9
            && x[1] >= -1e-9
            && rows
                .iter()
                .all(|(a, b)| a[0] * x[0] + a[1] * x[1] <= b + 1e-9)
    };
    let mut best: Option<(f64, [f64; 2])> = None;
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let ((a, e), (b, f)) = (lines[i], lines[j]);
            let det = a[0] * b[1] - a[1] * b[0];
            if det.abs() < 1e-12 {
                continue;
            }
            let x = [(e * b[1] - a[1] * f) / det, (a[0] * f - e * b[0]) / det];
            if feasible(x) {
                let v = c[0] * x[0] + c[1] * x[1];
                if best.is_none_or(|(bv, _)| v > bv) {
                    best = Some((v, x));
                }
            }
        }
    }
    best
}

fn two_var_lp(c: [f64; 2], rows: &[([f64; 2], f64)]) -> MilpProblem {
    let mut p = MilpProblem::new(Sense::Maximize);
    let a = p.add_continuous("a", c[0]);
    let b = p.add_continuous("b", c[1]);
    for &(coef, rhs) in rows {
        p.add_constraint([(a, coef[0]), (b, coef[1])], Relation::Le, rhs);
    }
    p
}

#[test]
fn small_lp_matches_vertex_enumeration() {
    let rows = [([1.0, 1.0], 4.0), ([1.0, 3.0], 6.0)];
    let (value, x) = vertex_oracle([3.0, 2.0], &rows).unwrap();
    assert_eq!((value, x), (12.0, [4.0, 0.0]));
    let sol = solve_lp(&two_var_lp([3.0, 2.0], &rows)).unwrap();
    assert!((sol.objective - 12.0).abs() < 1e-9);
    assert!((sol.values[0] - 4.0).abs() < 1e-9 && sol.values[1].abs() < 1e-9);
}

#[test]
fn random_bounded_lps_match_vertex_enumeration() {
    let mut rng = common::rng(11);
    for _ in 0..300 {
        let c = [rng.gen_range(-5..=5) as f64, rng.gen_range(-5..=5) as f64];
        // Positive coefficients on a box row keep the region bounded.
        let mut rows = vec![([1.0, 1.0], rng.gen_range(1..=10) as f64)];
        for _ in 0..rng.gen_range(0..4) {
            rows.push((
                [rng.gen_range(-3..=3) as f64, rng.gen_range(-3..=3) as f64],
                rng.gen_range(-2..=8) as f64,
            ));
        }
        let sol = solve_lp(&two_var_lp(c, &rows)).unwrap();
        match vertex_oracle(c, &rows) {
            Some((v, _)) => {
                assert_eq!(sol.status, Status::Optimal, "{rows:?}");
                assert!(
                    (sol.objective - v).abs() < 1e-7,
                    "{rows:?}: {} vs {v}",
                    sol.objective
                );
            }
            None => assert_eq!(sol.status, Status::Infeasible, "{rows:?}"),
        }
    }
}

#[test]
fn lp_strong_duality_spot_check() {
    // max c.x, Ax <= b, x >= 0  versus  min b.y, A'y >= c, y >= 0.
    let mut rng = common::rng(5);
    for _ in 0..50 {
        let (m, n) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let a: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.gen_range(0..=6) as f64).collect())
            .collect();
        let b: Vec<f64> = (0..m).map(|_| rng.gen_range(1..=20) as f64).collect();
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-3..=6) as f64).collect();

        let mut primal = MilpProblem::new(Sense::Maximize);
        let x: Vec<_> = (0..n)
            .map(|k| primal.add_continuous(format!("x{k}"), c[k]))
            .collect();
        for i in 0..m {
            primal.add_constraint(
                x.iter().zip(&a[i]).map(|(&v, &w)| (v, w)),
                Relation::Le,
                b[i],
            );
        }
        let mut dual = MilpProblem::new(Sense::Minimize);
        let y: Vec<_> = (0..m)
            .map(|i| dual.add_continuous(format!("y{i}"), b[i]))
            .collect();
        for k in 0..n {
            dual.add_constraint(
                y.iter().enumerate().map(|(i, &v)| (v, a[i][k])),
                Relation::Ge,
                c[k],
            );
        }
        let (ps, ds) = (solve_lp(&primal).unwrap(), solve_lp(&dual).unwrap());
        match ps.status {
            Status::Optimal => {
                assert_eq!(ds.status, Status::Optimal);
                assert!((ps.objective - ds.objective).abs() < 1e-7);
            }
            Status::Unbounded => assert_eq!(ds.status, Status::Infeasible),
            Status::Infeasible => unreachable!("x = 0 is feasible"),
        }
    }
}

#[test]
fn branch_and_bound_matches_enumeration() {
    let mut rng = common::rng(2024);
    let mut optimal = 0;
    for k in 0..300 {
        let p = common::random_milp(&mut rng, 8, 30);
        let bb = solve_milp(&p).unwrap();
        let oracle = enumerate_oracle(&p).unwrap();
        assert_eq!(
            bb.status,
            oracle.status,
            "problem {k}:\n{}",
            p.to_lp_string()
        );
        if bb.is_optimal() {
            optimal += 1;
            assert!(
                (bb.objective - oracle.objective).abs() <= 1e-7,
                "problem {k}"
            );
            assert!(p.max_violation(&bb.values) <= 1e-7);
            for z in p.binaries() {
                let v = bb.value(z);
                assert!(v == 0.0 || v == 1.0);
            }
        }
    }
    // The generator should not degenerate into all-infeasible instances.
    assert!(optimal > 100, "only {optimal} optimal instances");
}

#[test]
fn solving_is_deterministic() {
    let mut rng = common::rng(99);
    for _ in 0..30 {
        let p = common::random_milp(&mut rng, 6, 12);
        let (a, b) = (solve_milp(&p).unwrap(), solve_milp(&p).unwrap());
        assert_eq!(a.status, b.status);
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
        assert_eq!(a.values, b.values);
    }
}
