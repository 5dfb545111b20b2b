use clap::Parser;

fn main() {
    let cli = zaq::cli::Cli::parse();
    std::process::exit(zaq::cli::run(cli));
}
