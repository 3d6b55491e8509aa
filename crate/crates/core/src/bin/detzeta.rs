use clap::Parser;
use detzeta::cli::{run, RunConfig};

fn main() {
    std::process::exit(run(&RunConfig::parse()));
}
