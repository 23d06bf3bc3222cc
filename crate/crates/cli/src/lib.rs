//! Command-line front end: argument parsing, manifold files and the report
//! envelope. [`run`] executes one command in process, which is what `main`
//! and the integration tests call.

mod args;
pub mod commands;
pub mod envelope;
pub mod expr;
pub mod manifold;
mod ring_ops;
mod verify;

use std::ffi::OsString;

use clap::Parser;
use thiserror::Error;

use args::{Cli, Command};
pub use envelope::{Envelope, Rendered, Status};
pub use manifold::{load_manifold, parse_manifold, Manifold, ManifoldFile};
pub use verify::verify;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("unknown class {0:?}")]
    UnknownClass(String),
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn command_name(c: &Command) -> &'static str {
    use args::{BettiCommand as B, CatalogCommand as C, SubcritCommand as S};
    match c {
        Command::Verify { .. } => "verify",
        Command::Invert(_) => "invert",
        Command::Catalog(C::List) => "catalog list",
        Command::Catalog(C::Show { .. }) => "catalog show",
        Command::Catalog(C::Export { .. }) => "catalog export",
        Command::Betti(B::Cyclic { .. }) => "betti cyclic",
        Command::Betti(B::Periodicity { .. }) => "betti periodicity",
        Command::Betti(B::Transfer { .. }) => "betti transfer",
        Command::Betti(B::Window { .. }) => "betti window",
        Command::Betti(B::Gysin { .. }) => "betti gysin",
        Command::Betti(B::Oh { .. }) => "betti oh",
        Command::Defect { .. } => "defect",
        Command::Seidel { .. } => "seidel",
        Command::Subcrit(S::Run { .. }) => "subcrit run",
    }
}

fn dispatch(c: &Command) -> Result<Rendered, CliError> {
    match c {
        Command::Verify { file, cap } => verify(&load_manifold(file)?, commands::resolve_cap(*cap)?),
        Command::Invert(a) => commands::invert(a),
        Command::Catalog(c) => commands::catalog(c),
        Command::Betti(b) => commands::betti(b),
        Command::Defect { n, k, b2_not_1 } => commands::defect(*n, *k, !b2_not_1),
        Command::Seidel { file, d_min } => commands::seidel(file, *d_min),
        Command::Subcrit(s) => commands::subcrit(s),
    }
}

/// Parses `args` (including the program name) and runs the command. Exit
/// codes: 0 when every check passes, 1 when a check fails, 2 on bad input.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { exit_code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { exit_code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let rendered = dispatch(&cli.command).unwrap_or_else(|e| Rendered::error(command_name(&cli.command), &e.to_string()));
    let exit_code = rendered.envelope.status.exit_code();
    let (stdout, stderr) = match (cli.json, rendered.envelope.status) {
        (true, _) => (rendered.to_json(), String::new()),
        (false, Status::Error) => (String::new(), rendered.to_text()),
        (false, _) => (rendered.to_text(), String::new()),
    };
    Outcome { exit_code, stdout, stderr }
}
