//! `lgt`: batch front end for the lattice-gauge toolkit.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error.

mod args;
mod cmd;
mod manifest;

use std::process::ExitCode;

use clap::Parser;

use args::{BenchCommand, Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let result = match &cli.command {
        Command::RunMc(a) => cmd::mc::run(a, &out),
        Command::Hamiltonian(a) => cmd::hamiltonian::run(a, &out),
        Command::Strategy2(a) => cmd::strategy2::run(a, &out),
        Command::Replay(a) => cmd::strategy2::replay(a, &out),
        Command::Bench(b) => match b {
            BenchCommand::Timing(a) => cmd::bench::timing(a, &out),
            BenchCommand::Tau(a) => cmd::bench::tau(a, &out),
        },
        Command::Cost(a) => cmd::cost::run(a),
        Command::ConfigInspect(a) => cmd::inspect::run(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
