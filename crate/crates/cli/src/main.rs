//! `focus`: analysis, design, field maps and self-checks from the command line.
//!
//! Exit status is 0 on success, 1 when a check fails or a design is
//! infeasible, and 2 for configuration errors.

mod args;
mod commands;

use clap::Parser;

use args::{Cli, Command};

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Analyze(a) => commands::analyze(a),
        Command::Design(d) => commands::design(d),
        Command::Field(f) => commands::field(f),
        Command::Verify(v) => commands::verify(v),
        Command::Presets => commands::list_presets(),
    };
    if let Err(failure) = outcome {
        eprintln!("error: {}", failure.message());
        std::process::exit(failure.code());
    }
}
