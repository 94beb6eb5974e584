use super::{parse_csv, Dataset};

/// Tourism case study: 12 regions, bed places as interval input, four
/// desirable outputs and GHG emissions as an undesirable output.
pub const TOURISM_CSV: &str = include_str!("../../data/tourism.csv");
pub const TOURISM_SCHEMA_CSV: &str = include_str!("../../data/tourism.schema.csv");

/// The tourism dataset. Three bed-place cells are stored with reversed
/// endpoints and come back normalized, with warnings.
pub fn tourism_fixture() -> Dataset {
    parse_csv(TOURISM_CSV, TOURISM_SCHEMA_CSV).expect("bundled tourism data is valid")
}
