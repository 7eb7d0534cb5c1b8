mod cli;
mod commands;
mod output;

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use cli::{Cli, Command};
use commands::{CliError, Report};
use output::{manifest_path, Manifest};

fn run_command(cmd: &Command) -> Result<(&'static str, Report), CliError> {
    Ok(match cmd {
        Command::Spectrum(a) => ("spectrum", commands::spectrum(a)?),
        Command::Correlation(a) => ("correlation", commands::correlation(a)?),
        Command::Perturb(a) => ("perturb", commands::perturb(a)?),
        Command::Quench(a) => ("quench", commands::quench(a)?),
        Command::Replay(_) => unreachable!("replay is resolved before dispatch"),
    })
}

/// Runs `cmd`, then writes a manifest beside every file it produced.
fn execute(cmd: &Command) -> Result<(), CliError> {
    let start = Instant::now();
    let (name, report) = run_command(cmd)?;
    let nothing_solved = report.nothing_solved();
    let manifest = Manifest {
        subcommand: name.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        params: report.params,
        outputs: report.outputs,
        rows: report.rows,
        failures: report.failures,
        wall_time: start.elapsed().as_secs_f64(),
    };
    for path in &manifest.outputs {
        manifest.write(&manifest_path(path))?;
    }
    for f in &manifest.failures {
        log::warn!("{f}");
    }
    if nothing_solved {
        return Err(CliError::NothingSolved(manifest.failures));
    }
    Ok(())
}

fn replay(manifest: &Path, out: Option<&Path>) -> Result<Command, CliError> {
    let text = fs::read_to_string(manifest)?;
    let m = Manifest::parse(&text).map_err(CliError::Usage)?;
    if m.subcommand == "replay" {
        return Err(CliError::Usage("a replay manifest cannot be replayed".into()));
    }
    if m.version != env!("CARGO_PKG_VERSION") {
        log::warn!("manifest written by version {}, replaying with {}", m.version, env!("CARGO_PKG_VERSION"));
    }
    let parsed = Cli::try_parse_from(m.argv(out)).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(parsed.command)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let command = match &cli.command {
        Command::Replay(r) => match replay(&r.manifest, r.out.as_deref()) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
        other => other.clone(),
    };
    match execute(&command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::NothingSolved(_) => 2,
                _ => 1,
            })
        }
    }
}

