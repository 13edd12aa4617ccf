//! Command-line front end for `qchiplet`.
//!
//! Commands: `run` (circuit file to histogram), `qae`, `qpr` (symbolic
//! scripts) and `bench`. Exit status is 0 on success, 1 for parse or
//! validation errors, 2 for usage errors and 3 when the dimension cap is hit.

pub mod bench;
pub mod commands;
pub mod document;
pub mod error;
pub mod output;
pub mod script;

pub use bench::{run_bench, BenchConfig, BenchRow, Strategy};
pub use commands::{main_with, simulate_document, Cli};
pub use document::{compile, parse_circuit, to_json, CircuitDocument, CompiledDocument};
pub use error::{CliError, CliResult};
pub use output::{render, Format, Report};
pub use script::run_script;
