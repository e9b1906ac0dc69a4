mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Why a run failed, and the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Bad invocation.
    Usage(String),
    /// The computation itself failed.
    Compute(String),
    /// A derivation crashed; the result has already been written.
    Crash,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 64,
            Failure::Compute(_) => 1,
            Failure::Crash => 2,
        }
    }
}

impl From<syndyn_core::Error> for Failure {
    fn from(e: syndyn_core::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 64 } else { 0 });
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Compute(m) => eprintln!("error: {m}"),
                Failure::Crash => {}
            }
            ExitCode::from(f.code())
        }
    }
}
