use clap::Parser;

use exact_nmf::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
