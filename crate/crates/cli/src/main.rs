//! Batch front end for the alexandrov library.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Group};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(threads) = std::env::var("ALEXANDROV_THREADS").ok().and_then(|t| t.parse().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let result = match cli.group {
        Group::Surface(cmd) => commands::surface::run(cmd, &argv),
        Group::Gallery(cmd) => commands::gallery::run(cmd, &argv),
        Group::Prescribe(cmd) => commands::prescribe::run(cmd, &argv),
        Group::Lab(cmd) => commands::lab::run(cmd, &argv),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
