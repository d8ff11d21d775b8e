//! Sweeps, discrimination tables and verification runs on top of
//! `catalytic-core`.

pub mod config;
pub mod discriminate;
pub mod error;
pub mod record;
pub mod simulate;
pub mod verify;

pub use config::{ConfigArgs, OutputFormat, RunConfig, UnitarySpec};
pub use discriminate::cmd_discriminate;
pub use error::{CliError, CliResult};
pub use record::{DiscriminationRecord, SweepRecord};
pub use simulate::cmd_simulate;
pub use verify::{cmd_verify, Check, Status, VerifyOptions, VerifyReport};
