//! One-phase interval inefficiency for all twelve regions of the bundled
//! tourism dataset, with targets for the inefficient ones.
//!
//! ```bash
//! cargo run --example tourism_eimil
//! ```

use intdea::dataset::tourism_fixture;
use intdea::eimil::{assess_all, BigMConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ds = tourism_fixture();
    let names: Vec<&str> = ds.schema().iter().map(|v| v.name.as_str()).collect();
    println!("variables: {}", names.join(", "));

    for result in assess_all(&ds, &BigMConfig::default()) {
        let a = result?;
        let name = &ds.dmus()[a.dmu].name;
        if a.is_efficient() {
            println!("{name:<32} EI = 0 (efficient)");
            continue;
        }
        println!("{name:<32} EI = {:.6}", a.score);
        let peers: Vec<String> = a
            .lambda
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > 1e-9)
            .map(|(j, l)| format!("{} {:.3}", ds.dmus()[j].name, l))
            .collect();
        println!("    peers: {}", peers.join(", "));
        for t in a.input_targets.iter().chain(&a.output_targets) {
            println!("    target {t}");
        }
    }
    Ok(())
}
