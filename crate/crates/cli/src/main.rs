//! `wehrl-lab`: verification runs from the command line.
//!
//! Exit status: 0 when every check passes, 2 when any check fails, 1 on
//! configuration or evaluation errors. `WEHRL_LAB_THREADS` caps the worker
//! pool.

mod args;
mod commands;
mod output;
mod source;

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use args::{Cli, Command};

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("WEHRL_LAB_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("WEHRL_LAB_THREADS = '{v}'"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    init_threads()?;
    match cli.command {
        Command::Verify { inequality, run } => commands::verify(inequality, &run),
        Command::Distribution { run, points } => commands::distribution(&run, points).map(|()| true),
        Command::CompareOde { run, pairs, explicit } => commands::compare_ode(&run, pairs, &explicit),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
