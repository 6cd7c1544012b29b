mod args;
mod commands;
mod output;

use clap::Parser;
use mlbound_core::ErrorClass;

fn main() {
    let cli = args::Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 || rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().is_err() {
            eprintln!("error: invalid thread count {threads}");
            std::process::exit(2);
        }
    }
    if let Err(e) = commands::run(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(match e.class() {
            ErrorClass::Config => 2,
            ErrorClass::Numeric => 3,
            ErrorClass::SizeGuard => 4,
        });
    }
}
