//! Parsing, check orchestration and reporting for the `gft` binary.

pub mod checks;
pub mod commands;
pub mod parse;
pub mod report;
pub mod source;

pub use checks::{run_checks, RunOptions, DEFAULT_SEED, FUSION_CHECKS, SCHEME_CHECKS};
pub use commands::{execute, Cli, Command};
pub use report::{render, CheckReport, Document, EntryReport, Format};
pub use source::{resolve, CorpusEntry, CorpusObject, SourceError};
