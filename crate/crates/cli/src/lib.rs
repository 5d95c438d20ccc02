//! Command-line front end: configuration, orchestration and result files.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;

use cli::{Cli, Command};
use config::{resolve_globals, ConfigFile, Globals};
use error::CliResult;
use output::Summary;

/// Merged global settings plus the parsed configuration file.
pub struct Context {
    pub globals: Globals,
    pub file: ConfigFile,
}

pub fn run(cli: &Cli) -> CliResult<Summary> {
    let file = match &cli.global.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let globals = resolve_globals(&cli.global, &file)?;
    let ctx = Context { globals, file };
    match &cli.command {
        Command::Bounds(a) => commands::bounds::run(&ctx, a),
        Command::Thresholds => commands::thresholds::run(&ctx),
        Command::ProtocolRun(a) => commands::protocol::run(&ctx, a),
        Command::Learn(a) => commands::learn::run(&ctx, a),
        Command::SweepEta(a) => commands::sweep::run(&ctx, a),
        Command::Histograms(a) => commands::histograms::run(&ctx, a),
        Command::Selfcheck(a) => commands::selfcheck::run(&ctx, a),
    }
}
