//! Slacks-based data envelopment analysis for interval data: a one-phase
//! mixed-integer inefficiency model, a two-phase interval model, a crisp
//! model, super-efficiency ranking, and the LP/MILP engine they run on.

pub mod crisp;
pub mod dataset;
pub mod eimil;
pub mod error;
pub mod interval;
pub mod milp;
pub mod report;
pub mod super_eimil;
pub mod tol;
pub mod two_phase;
