//! Command-line front end: batch evaluation, sampling and verification,
//! writing CSV or JSON tables.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails,
//! 2 on usage or parameter errors.

pub mod args;
pub mod commands;
pub mod table;
pub mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::Parser;

use args::{Cli, Command, Common};
use commands::Outcome;

use crate::error::Result;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Parses `args`, runs the command, writes its table, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli.common, cli.command.name(), &outcome) {
                eprintln!("error: cannot write output: {e}");
                return EXIT_USAGE;
            }
            if outcome.failed {
                eprintln!("{}: one or more checks failed", cli.command.name());
                EXIT_CHECK_FAILED
            } else {
                EXIT_PASS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let spec = cli.common.spec();
    spec.validate()?;
    let seed = cli.common.seed;
    match &cli.command {
        Command::EvalMl { alpha, z, routes, agree_tol } => commands::eval_ml(&alpha.0, &z.0, routes, *agree_tol, &spec),
        Command::EvalPrabhakar { base, lambda, x, routes, agree_tol } => {
            commands::eval_prabhakar(base, &lambda.0, &x.0, routes, *agree_tol, &spec)
        }
        Command::EvalStable { alpha, t, x } => commands::eval_stable(&alpha.0, &t.0, &x.0, &spec),
        Command::EvalMixture { alpha, nu, mu, lambda, x } => {
            commands::eval_mixture(&alpha.0, &nu.0, &mu.0, &lambda.0, &x.0, &spec)
        }
        Command::Density { base, t } => commands::density(base, &t.0, &spec),
        Command::Moments { base, n } => commands::moments(base, &n.0, &spec),
        Command::Sample { base, count, summary_only } => commands::sample(base, *count, *summary_only, seed, &spec),
        Command::Verify { suite } => commands::verify(suite, seed, &spec),
        Command::CmCheck { base, lambda_max, points, order } => commands::cm(base, *lambda_max, *points, *order, &spec),
    }
}

fn destination(common: &Common, command: &str) -> Option<PathBuf> {
    if let Some(p) = &common.output {
        return Some(p.clone());
    }
    common.output_dir.as_ref().map(|d| d.join(format!("{command}.{}", common.format.extension())))
}

fn emit(common: &Common, command: &str, outcome: &Outcome) -> io::Result<()> {
    match destination(common, command) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            let mut f = io::BufWriter::new(fs::File::create(&path)?);
            outcome.table.write(&mut f, common.format)?;
            f.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut lock = io::BufWriter::new(stdout.lock());
            outcome.table.write(&mut lock, common.format)?;
            lock.flush()
        }
    }
}
