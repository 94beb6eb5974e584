//! The crisp slacks-based inefficiency model and its super-efficiency
//! counterpart on point data.
//!
//! ```bash
//! cargo run --example crisp_sbi
//! ```

use intdea::crisp::{assess_crisp, assess_crisp_super, Rts};
use intdea::dataset::{Dataset, Role};
use intdea::interval::Interval;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let schema = vec![
        ("labour".to_string(), Role::Input),
        ("capital".to_string(), Role::Input),
        ("output".to_string(), Role::Output),
    ];
    let rows = [
        ("A", [4.0, 3.0, 1.0]),
        ("B", [7.0, 3.0, 1.0]),
        ("C", [8.0, 1.0, 1.0]),
        ("D", [4.0, 2.0, 1.0]),
        ("E", [2.0, 4.0, 1.0]),
    ];
    let dmus = rows
        .iter()
        .map(|(n, v)| {
            (
                n.to_string(),
                v.iter().map(|&x| Interval::degenerate(x)).collect(),
            )
        })
        .collect();
    let ds = Dataset::new(schema, dmus)?;

    for rts in [Rts::Crs, Rts::Vrs] {
        println!("{rts:?}");
        for p in 0..ds.n() {
            let a = assess_crisp(&ds, p, rts)?;
            let name = &ds.dmus()[p].name;
            if a.is_efficient() {
                let s = assess_crisp_super(&ds, p, rts)?;
                println!("  {name}: efficient, super score {:.4}", s.score);
            } else {
                println!(
                    "  {name}: I = {:.4}, input slacks {:?}",
                    a.score, a.input_slacks
                );
            }
        }
    }
    Ok(())
}
