//! The embedded LP/MILP engine on its own: a small knapsack with a
//! switched capacity, checked against brute-force enumeration.
//!
//! ```bash
//! cargo run --example milp_solver
//! ```

use intdea::milp::{enumerate_oracle, solve_milp, MilpProblem, Relation, Sense};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut p = MilpProblem::new(Sense::Maximize);
    let items = [(4.0, 12.0), (2.0, 2.0), (6.0, 4.0), (1.0, 1.0), (2.0, 1.0)];
    let picks: Vec<_> = items
        .iter()
        .enumerate()
        .map(|(k, &(_, value))| p.add_binary(format!("take{k}"), value))
        .collect();
    p.add_constraint(
        picks.iter().zip(&items).map(|(&z, &(w, _))| (z, w)),
        Relation::Le,
        15.0,
    );

    // Extra volume costs 0.5 per unit, only available when the trailer is hired.
    let extra = p.add_continuous("extra", -0.5);
    let trailer = p.add_binary("trailer", -3.0);
    p.add_constraint([(extra, 1.0), (trailer, -5.0)], Relation::Le, 0.0);
    p.add_constraint(
        picks
            .iter()
            .zip(&items)
            .map(|(&z, &(w, _))| (z, w))
            .chain([(extra, -1.0)]),
        Relation::Le,
        10.0,
    );

    print!("{}", p.to_lp_string());
    let sol = solve_milp(&p)?;
    println!("status {:?}, objective {}", sol.status, sol.objective);
    for v in p.binaries() {
        println!("  {} = {}", p.name(v), sol.value(v));
    }
    println!("  extra = {}", sol.value(extra));

    let oracle = enumerate_oracle(&p)?;
    println!(
        "enumeration agrees: {}",
        (oracle.objective - sol.objective).abs() < 1e-9
    );
    Ok(())
}
