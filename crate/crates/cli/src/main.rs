use clap::Parser;
use quasibos_cli::commands::{run, Cli};

fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    std::process::exit(run(&cli, &argv));
}
