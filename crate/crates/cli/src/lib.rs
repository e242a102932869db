//! Scenario runner for the exact homological algebra workbench: a JSON
//! scenario format for describing graded algebras, semifree modules and
//! verification tasks, a deterministic report format, seeded verification
//! sweeps, and the built-in suite.

pub mod explain;
pub mod report;
pub mod runner;
pub mod scenario;
pub mod suite;
pub mod sweeps;
