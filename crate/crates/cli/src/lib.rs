//! Command-line front end: node-set ingestion, certified reports and the
//! seeded random suite.

pub mod analyze;
pub mod emit;
pub mod error;
pub mod input;
pub mod suite;

pub use analyze::{analyze_document, run_analyze, AnalyzeConfig, Degree, Format, Report};
pub use error::{CliError, Result, EXIT_FAILURE, EXIT_USAGE};
pub use input::parse_nodeset;
pub use suite::{run_suite, DegreeRule, SuiteConfig, SuiteSummary};
