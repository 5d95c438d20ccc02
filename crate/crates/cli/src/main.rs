use clap::Parser;
use qlabel_cli::cli::Cli;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = qlabel_cli::run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
