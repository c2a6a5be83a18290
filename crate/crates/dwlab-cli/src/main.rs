mod commands;
mod config;
mod output;

use std::env;
use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command};
use dwlab_core::DwError;

/// 0 pass, 1 verification failure, 2 configuration, input or degenerate data.
fn exit_code(e: &DwError) -> u8 {
    match e {
        DwError::FitResidualTooLarge { .. } | DwError::NonConvergence { .. } | DwError::PowerIterationStall { .. } => 1,
        _ => 2,
    }
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = env::var("DWLAB_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| format!("DWLAB_THREADS={v:?} is not a positive integer"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("dwlab: {e}");
        return ExitCode::from(2);
    }
    let (outcome, out) = match &cli.command {
        Command::Certify(a) => (commands::certify(a), &a.output),
        Command::Solve(a) => (commands::solve(a), &a.output),
        Command::Space(a) => (commands::space(a), &a.output),
        Command::Transform(a) => (commands::transform(a), &a.output),
        Command::Quadcheck(a) => (commands::quadcheck(a), &a.output),
    };
    match outcome.and_then(|o| o.emit(out).map(|_| o.pass)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("dwlab: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
