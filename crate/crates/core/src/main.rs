use clap::Parser;

fn main() {
    let cli = fdnoma::cli::Cli::parse();
    std::process::exit(fdnoma::cli::run(&cli));
}
