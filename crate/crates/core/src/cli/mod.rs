//! Scenario configuration, runs and their artifacts.
//!
//! Configs are flat `key = value` text with dotted keys. Every run writes
//! `summary.json` (deterministic for a given config and seed),
//! `metadata.json` (resolved config, defaults, version, wall time) and the
//! scenario's CSV files.

mod config;
mod run;

pub use config::{parse_complex, parse_config, KeySpec, RunConfig, Scenario, ScenarioParams};
pub use run::{describe_scenarios, error_json, exit_code, run, RunReport};
