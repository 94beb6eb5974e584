//! The two-phase interval model on one tourism region: phase one gives
//! the inefficiency `I` and interval slacks, phase two the residual
//! endpoint slacks that remain once the lambdas are fixed.
//!
//! ```bash
//! cargo run --example two_phase_idea
//! ```

use intdea::dataset::tourism_fixture;
use intdea::two_phase::{assess_idea, assess_idea_phase2};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ds = tourism_fixture();
    let p = ds
        .dmus()
        .iter()
        .position(|d| d.name == "Cyprus")
        .expect("fixture region");

    let first = assess_idea(&ds, p)?;
    println!("{}: I = {:.6}", ds.dmus()[p].name, first.score);
    for (k, s) in first.input_slacks.iter().enumerate() {
        println!("  input slack {k}: {s}");
    }
    for (k, s) in first.output_slacks.iter().enumerate() {
        println!("  output slack {k}: {s}");
    }

    let second = assess_idea_phase2(&ds, p, &first)?;
    println!(
        "H = {:.6}, efficient: {}",
        second.residual_score,
        second.is_efficient()
    );
    for (t, r) in second.input_targets.iter().zip(&second.input_residuals) {
        println!(
            "  input target {t}  residual [{:.4}, {:.4}]",
            r.left, r.right
        );
    }
    for (t, r) in second.output_targets.iter().zip(&second.output_residuals) {
        println!(
            "  output target {t}  residual [{:.4}, {:.4}]",
            r.left, r.right
        );
    }
    Ok(())
}
