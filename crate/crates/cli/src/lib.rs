//! Declarative scenario runner for the verification suites of
//! `quiverlab-core` and `quiverlab-ktheory`.

pub mod error;
pub mod files;
pub mod report;
pub mod runner;
pub mod suites;

pub use error::{Error, Result};
pub use files::{Scenario, ScenarioFile};
pub use report::{Check, Format, Kind, Report};
pub use runner::{generate, run, RunOptions};
pub use suites::Suite;
