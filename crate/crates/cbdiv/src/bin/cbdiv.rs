use clap::Parser;

fn main() {
    let cli = cbdiv::cli::Cli::parse();
    std::process::exit(cbdiv::cli::run(cli));
}
