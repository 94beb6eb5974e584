#![allow(dead_code)]

use intdea::dataset::{Dataset, Role};
use intdea::interval::Interval;
use intdea::milp::{MilpProblem, Relation, Sense, Var};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn endpoint(rng: &mut ChaCha8Rng) -> f64 {
    // Two decimals keep the data readable when a failure is printed.
    (rng.gen_range(1.0..100.0_f64) * 100.0).round() / 100.0
}

pub fn random_interval(rng: &mut ChaCha8Rng) -> Interval {
    let (a, b) = (endpoint(rng), endpoint(rng));
    Interval::new(a.min(b), a.max(b)).unwrap()
}

fn schema(m: usize, s: usize) -> Vec<(String, Role)> {
    (0..m)
        .map(|i| (format!("x{i}"), Role::Input))
        .chain((0..s).map(|r| (format!("y{r}"), Role::Output)))
        .collect()
}

/// Interval dataset with `2..=10` DMUs, `1..=3` inputs and `1..=3` outputs.
pub fn random_dataset(rng: &mut ChaCha8Rng) -> Dataset {
    let n = rng.gen_range(2..=10);
    let (m, s) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    let dmus = (0..n)
        .map(|j| {
            (
                format!("d{j}"),
                (0..m + s).map(|_| random_interval(rng)).collect(),
            )
        })
        .collect();
    Dataset::new(schema(m, s), dmus).unwrap()
}

/// Same shape, every cell degenerate.
pub fn random_crisp_dataset(rng: &mut ChaCha8Rng) -> Dataset {
    let n = rng.gen_range(2..=10);
    let (m, s) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    let dmus = (0..n)
        .map(|j| {
            (
                format!("d{j}"),
                (0..m + s)
                    .map(|_| Interval::degenerate(endpoint(rng)))
                    .collect(),
            )
        })
        .collect();
    Dataset::new(schema(m, s), dmus).unwrap()
}

/// Bounded MILP with up to `max_bin` binaries and `max_cont` continuous
/// variables. Every continuous variable has an upper bound, some of them
/// switched by a binary, so the optimum is always finite when feasible.
pub fn random_milp(rng: &mut ChaCha8Rng, max_bin: usize, max_cont: usize) -> MilpProblem {
    let sense = if rng.gen_bool(0.5) {
        Sense::Maximize
    } else {
        Sense::Minimize
    };
    let mut p = MilpProblem::new(sense);
    let nc = rng.gen_range(1..=max_cont);
    let nb = rng.gen_range(0..=max_bin);
    let coef = |rng: &mut ChaCha8Rng| rng.gen_range(-5..=5) as f64;
    let cont: Vec<Var> = (0..nc)
        .map(|k| p.add_continuous(format!("x{k}"), 0.0))
        .collect();
    let bins: Vec<Var> = (0..nb)
        .map(|k| p.add_binary(format!("z{k}"), 0.0))
        .collect();
    for &v in cont.iter().chain(&bins) {
        let c = coef(rng);
        p.set_objective(v, c);
    }
    for &x in &cont {
        let ub = rng.gen_range(1..=10) as f64;
        if !bins.is_empty() && rng.gen_bool(0.5) {
            let z = bins[rng.gen_range(0..bins.len())];
            p.add_constraint([(x, 1.0), (z, -ub)], Relation::Le, 0.0);
        } else {
            p.add_constraint([(x, 1.0)], Relation::Le, ub);
        }
    }
    for _ in 0..rng.gen_range(1..=8) {
        let mut terms = Vec::new();
        for &v in cont.iter().chain(&bins) {
            if rng.gen_bool(0.4) {
                terms.push((v, coef(rng)));
            }
        }
        if terms.is_empty() {
            continue;
        }
        let rel = match rng.gen_range(0..5) {
            0 => Relation::Ge,
            1 => Relation::Eq,
            _ => Relation::Le,
        };
        let rhs = rng.gen_range(-5..=15) as f64;
        p.add_constraint(terms, rel, rhs);
    }
    p
}
