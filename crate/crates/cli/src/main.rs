use clap::Parser;
use frftkit_cli::args::Cli;
use frftkit_cli::{commands, init_threads};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = init_threads().and_then(|()| commands::run(cli)) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
