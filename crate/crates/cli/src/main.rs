use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

mod args;
mod commands;

use args::{Cli, Command};

/// 2 for mathematical rejections (expansive operator, empty affine fixed
/// set), 1 for everything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<fixpoint_core::Error>() {
        Some(e) if e.is_mathematical_rejection() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };

    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let result = match &cli.command {
        Command::Check(a) => commands::check(a),
        Command::Run(a) => commands::run(a, cli.verbose),
        Command::Sweep(a) => commands::sweep(a),
        Command::Abbr(a) => commands::abbr(a),
        Command::Experiment(a) => commands::experiment(a),
    };
    match result {
        Ok(out) => {
            let written = serde_json::to_string_pretty(&out.json)
                .map_err(std::io::Error::from)
                .and_then(|text| writeln!(std::io::stdout().lock(), "{text}"));
            match written {
                Ok(()) => {}
                // Downstream closed the pipe early; nothing left to report to.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
            if !cli.quiet {
                eprintln!("{}", out.summary);
            }
            ExitCode::from(out.code)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
