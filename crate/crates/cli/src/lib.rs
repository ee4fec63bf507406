//! Command implementations behind the `homflow` binary.

pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod sweep;
pub mod verify;

pub use config::{Axis, RunConfig, Spacing, SweepConfig, SweepMode};
pub use error::{CliError, CliResult};
pub use run::{cmd_run, RunSummary};
pub use sweep::{cmd_sweep, SweepRecord, SweepReport, TerminationCounts};
pub use verify::{cmd_verify, Check, VerifyReport};
