mod args;
mod commands;
mod failure;
mod selftest;

use clap::Parser;

use args::{Cli, Command};
use failure::{Failure, Outcome};

fn configure_threads() -> Outcome {
    let Ok(value) = std::env::var("SPHERELOK_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Usage(format!("SPHERELOK_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: Cli) -> Outcome {
    configure_threads()?;
    match &cli.command {
        Command::Plan(c) => commands::plan(c),
        Command::Analyze(c) => commands::analyze(c),
        Command::Synthesize(c) => commands::synthesize(c),
        Command::Filter(c) => commands::filter_cmd(c),
        Command::Spectrum(c) => commands::spectrum(c),
        Command::Grid(c) => commands::grid(c),
        Command::Bench(c) => commands::bench(c),
        Command::Selftest(c) => selftest::run(c),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(failure) = run(cli) {
        eprintln!("spherelok: {failure}");
        std::process::exit(failure.code());
    }
}
