use clap::Parser;
use slice_dirac::harness::{configure_threads, execute, Cli, EXIT_ERROR};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        std::process::exit(EXIT_ERROR);
    }
    std::process::exit(execute(&cli));
}
