//! Full ranking of the tourism regions: efficient ones ordered by
//! super-inefficiency, inefficient ones by their score.
//!
//! ```bash
//! cargo run --example super_ranking
//! ```

use intdea::dataset::tourism_fixture;
use intdea::eimil::BigMConfig;
use intdea::super_eimil::rank;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ds = tourism_fixture();
    let run = rank(&ds, &BigMConfig::default(), &BigMConfig::super_default())?;
    println!("{}", run.ranking.convention);
    for e in &run.ranking.entries {
        let sei = match (e.sei, e.super_status) {
            (Some(v), _) => format!("SEI {v:.6}"),
            (None, Some(_)) => "super model infeasible".to_string(),
            (None, None) => String::new(),
        };
        println!("{:>2}. {:<32} EI {:.6}  {sei}", e.rank, e.name, e.ei);
    }
    Ok(())
}
