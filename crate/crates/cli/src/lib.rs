//! Command-line front end for `lomse-core`.

pub mod commands;
pub mod config;

use clap::Parser;
use config::{load_file_config, Cli, FileConfig, RunConfig};
use std::process::ExitCode;

pub const EXIT_FAILED_CHECK: u8 = 1;
pub const EXIT_INVALID_CONFIG: u8 = 2;

/// Parses the arguments, runs the command and writes its outputs.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let file = match &cli.opts.config {
        Some(path) => match load_file_config(path) {
            Ok(f) => f,
            Err(e) => return fail(EXIT_INVALID_CONFIG, &e),
        },
        None => FileConfig::default(),
    };
    let cfg = match RunConfig::resolve(cli.command, &cli.opts, &file) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_INVALID_CONFIG, &e),
    };
    let outcome = match commands::run(&cfg) {
        Ok(o) => o,
        Err(commands::Failure::Config(e)) => return fail(EXIT_INVALID_CONFIG, &e),
        Err(commands::Failure::Runtime(e)) => return fail(EXIT_FAILED_CHECK, &e),
    };
    if let Some(dir) = &cfg.output_dir {
        if let Err(e) = std::fs::create_dir_all(dir) {
            return fail(EXIT_INVALID_CONFIG, &format!("cannot create {}: {e}", dir.display()));
        }
        for (name, contents) in &outcome.files {
            let path = dir.join(name);
            if let Err(e) = std::fs::write(&path, contents) {
                return fail(EXIT_INVALID_CONFIG, &format!("cannot write {}: {e}", path.display()));
            }
        }
    }
    print!("{}", outcome.stdout);
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: one or more checks failed");
        ExitCode::from(EXIT_FAILED_CHECK)
    }
}

fn fail(code: u8, msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}
