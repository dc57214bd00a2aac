mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::UsageError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Binarize { input, out, params } => commands::binarize(input, out, &params),
        Command::Sweep {
            input,
            out,
            gt,
            params,
            jobs,
        } => commands::sweep(&input, &out, gt.as_deref(), &params, jobs.jobs),
        Command::Batch {
            input,
            out,
            gt,
            report,
            params,
            jobs,
        } => commands::batch(&input, &out, gt.as_deref(), report, &params, jobs.jobs),
        Command::Evaluate { pred, gt, report } => commands::evaluate(&pred, &gt, &report),
    };
    match result {
        Ok(code) => code,
        Err(err) if err.downcast_ref::<UsageError>().is_some() => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
