//! Configuration, dispatch and file output for the `wehrlsim` binary.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{env_entries, flag_entries, parse_entries, parse_file, resolve, Entry, KEYS};
pub use error::CliError;
pub use run::{execute, list_scenarios, RunManifest, Verb, MANIFEST_NAME};
