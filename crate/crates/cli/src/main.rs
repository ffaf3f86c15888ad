use clap::Parser;
use qdissip_cli::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = execute(&cli) {
        eprintln!("qdissip: {e}");
        std::process::exit(e.exit_code());
    }
}
