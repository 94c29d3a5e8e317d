//! Unified command-line entry point over the spectral library: closed-form
//! ball spectra, Galerkin solves, branch traces, Dirichlet solves,
//! trace-compatibility checks, growth-law fits, and raw pencil assembly.

mod cli;
mod config;
mod data;
mod output;
mod run;

use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Cmd};
use config::Settings;
use output::{write_output, Format};
use run::Ctx;

fn main() -> ExitCode {
    let parsed = match Cli::try_parse() {
        Ok(parsed) => parsed,
        Err(e) => {
            // Help and version requests land on stdout with status 0; real
            // parse problems are errors (status 1), never verdict failures.
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp
                    | clap::error::ErrorKind::DisplayVersion
                    | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            );
            let _ = e.print();
            return if informational {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match dispatch(parsed) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(parsed: Cli) -> Result<ExitCode, String> {
    let mut settings = match &parsed.config {
        Some(path) => Settings::load(path)?,
        None => Settings::empty(),
    };
    settings.note("subcommand", parsed.cmd.name());

    let format_name: String = settings.require("format", parsed.format, Some("csv".into()))?;
    let format = Format::parse(&format_name)?;
    let out = settings.resolve("out", parsed.out, None)?;
    let threads = settings.require("threads", parsed.threads, Some(1))?;
    if threads == 0 {
        return Err("--threads must be at least 1".into());
    }
    let seed = settings.require("seed", parsed.seed, Some(0))?;
    let ctx = Ctx { seed };

    let output = match parsed.cmd {
        Cmd::BallSpectrum(args) => run::ball_spectrum_run(&mut settings, args)?,
        Cmd::Solve(args) => run::solve_run(&mut settings, args)?,
        Cmd::BranchTrace(args) => run::branch_trace_run(&mut settings, args)?,
        Cmd::DirichletSolve(args) => run::dirichlet_solve_run(&mut settings, args, &ctx)?,
        Cmd::TraceCheck(args) => run::trace_check_run(&mut settings, args)?,
        Cmd::WeylCheck(args) => run::weyl_check_run(&mut settings, args)?,
        Cmd::Assemble(args) => run::assemble_run(&mut settings, args)?,
    };
    settings.finish()?;
    write_output(&output, format, out, &settings.echo)?;

    Ok(match output.verdict_ok {
        Some(false) => ExitCode::from(2),
        _ => ExitCode::SUCCESS,
    })
}
