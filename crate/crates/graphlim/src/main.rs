use clap::Parser;

fn main() {
    let cli = graphlim::cli::Cli::parse();
    std::process::exit(graphlim::cli::run(cli));
}
