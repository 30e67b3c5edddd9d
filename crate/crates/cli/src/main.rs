use clap::Parser;

fn main() {
    std::process::exit(picard_cli::run(picard_cli::Cli::parse()));
}
