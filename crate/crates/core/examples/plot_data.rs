//! Builds the JSON report for the tourism data and prints the plot-data
//! CSV of each inefficient region (observed against target endpoints).
//!
//! ```bash
//! cargo run --example plot_data
//! ```

use intdea::dataset::tourism_fixture;
use intdea::report::{build_report, dmu_file_stem, plot_csv, report_json, ModelKind, ModelOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ds = tourism_fixture();
    let report = build_report(&ds, &ModelOptions::new(ModelKind::Eimil, true))?;

    let json = report_json(&report);
    println!(
        "report: {} bytes of JSON, schema version {}",
        json.len(),
        report.schema_version
    );

    for d in report.dmus.iter().filter(|d| !d.efficient) {
        println!("--- {}.csv", dmu_file_stem(d.index, &d.name));
        print!("{}", plot_csv(d));
    }
    Ok(())
}
