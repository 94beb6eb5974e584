//! Reading a dataset from the two CSV files (data and schema), including
//! what validation reports for malformed input.
//!
//! ```bash
//! cargo run --example csv_ingest
//! ```

use intdea::dataset::parse_csv;

const SCHEMA: &str =
    "name,role\nstaff,input\nbeds,input\nguests,output\nwaste,undesirable_output\n";

const DATA: &str = "\
# Comment lines are skipped. Interval cells are written lo..hi.
dmu,staff,beds,guests,waste
Harbour,10..12,40,900..1100,3..4
Hillside,8..9,35..38,700..820,2.5
Old Town,15..18,60..61,1500..1650,6..7
";

fn main() {
    let ds = parse_csv(DATA, SCHEMA).expect("valid input");
    println!("{} DMUs, {} inputs, {} outputs", ds.n(), ds.m(), ds.s());
    for spec in ds.schema() {
        println!("  {} ({})", spec.name, spec.role);
    }
    // Undesirable outputs are assessed on the input side.
    let o = ds.orientation().expect("has inputs and outputs");
    println!("model layout: {} inputs, {} outputs", o.m(), o.s());
    for (j, d) in ds.dmus().iter().enumerate() {
        let cells: Vec<String> = ds.row(j).iter().map(ToString::to_string).collect();
        println!("  {:<9} {}", d.name, cells.join(" "));
    }
    println!("crisp: {}", ds.is_crisp());

    let broken = [
        DATA.replace("900..1100", "1100..900"),
        DATA.replace(",waste\n", "\n"),
        DATA.replace("3..4\n", "3..x\n"),
    ];
    // Reversed endpoints are repaired with a warning; the rest are errors.
    for text in &broken {
        match parse_csv(text, SCHEMA) {
            Ok(ds) => println!("accepted with warnings: {:?}", ds.warnings()),
            Err(e) => println!("rejected: {e}"),
        }
    }
}
