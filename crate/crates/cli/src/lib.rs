//! Driver for the hk4 certification suite: named checks compared against a
//! version-controlled expectations file, scenario ingestion and reports.

pub mod app;
pub mod checks;
pub mod display;
pub mod error;
pub mod expectations;
pub mod report;
pub mod scenario;

pub use app::run;
pub use checks::CheckId;
pub use error::CliError;
pub use expectations::Expectations;
pub use report::{CheckResult, CheckStatus, Report};
pub use scenario::Scenario;
