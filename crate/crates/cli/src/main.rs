use clap::Parser;

fn main() {
    let cli = helitube_cli::Cli::parse();
    std::process::exit(helitube_cli::run(&cli));
}
