//! Command-line harness around `kantlab-core`: suite configs, a worker pool
//! over (checker, density, parameter) jobs, refinement studies, transport
//! oracle cross-checks and CSV/JSON reports.

pub mod config;
pub mod error;
pub mod oracle;
pub mod random;
pub mod refine;
pub mod report;
pub mod suite;
pub mod world;

pub use config::{CheckerId, SuiteConfig};
pub use error::HarnessError;
pub use kantlab_core as core;
pub use oracle::{oracle_crosscheck, OracleStudy};
pub use refine::{refine_study, RefineStudy};
pub use suite::{run_suite, RunOptions, SuiteRun};

/// The bundled suite configuration.
pub const DEFAULT_CONFIG: &str = include_str!("../default.cfg");
