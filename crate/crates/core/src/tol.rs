//! Numerical tolerances shared across the crate.

/// Endpoint equality tolerance for interval invariants.
pub const TAU: f64 = 1e-9;

/// Constraint feasibility tolerance for solver assignments.
pub const FEASIBILITY: f64 = 1e-7;

/// Reduced-cost optimality tolerance in the simplex.
pub const OPTIMALITY: f64 = 1e-9;

/// A DMU whose inefficiency score is at most this value is efficient.
pub const SCORE: f64 = 1e-6;

/// Maximum disagreement between slack-derived and intensity-derived targets,
/// relative to their magnitude (absolute below 1).
pub const TARGET_AGREEMENT: f64 = 1e-5;
