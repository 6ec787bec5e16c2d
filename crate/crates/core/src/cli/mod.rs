//! Command-line front end: argument parsing, dispatch and exit codes.

mod args;
mod commands;

use std::fmt;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::Cli;

/// A failed run, classified by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or option values (exit 1).
    Usage(String),
    /// Unreadable or malformed input (exit 2).
    Input(String),
    /// The computation itself failed (exit 3).
    Compute(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Compute(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Input(_) => "input",
            Failure::Compute(_) => "computation",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Compute(m) => m,
        }
    }

    /// The one-line JSON diagnostic written to stderr.
    pub fn to_json_line(&self) -> String {
        json!({"error": self.kind(), "code": self.code(), "message": self.message()}).to_string()
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind(), self.message())
    }
}

impl From<curvscape::Error> for Failure {
    fn from(e: curvscape::Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Compute(e.to_string())
        }
    }
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn main_with_args(argv: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let info = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            if info {
                let _ = e.print();
                return 0;
            }
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            let first = first.trim_start_matches("error: ").to_string();
            return report(Failure::Usage(first));
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(f) => report(f),
    }
}

fn report(f: Failure) -> i32 {
    let _ = writeln!(std::io::stderr(), "{}", f.to_json_line());
    f.code()
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = cli.run.resolve()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Failure::Compute(e.to_string()))?;
    let out = pool.install(|| commands::dispatch(&cli.command, &cfg))?;
    let mut stdout = std::io::stdout().lock();
    stdout
        .write_all(out.as_bytes())
        .and_then(|_| stdout.flush())
        .or_else(|e| match e.kind() {
            std::io::ErrorKind::BrokenPipe => Ok(()),
            _ => Err(e),
        })
        .map_err(|e| Failure::Compute(format!("writing output: {e}")))
}
