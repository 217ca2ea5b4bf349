use clap::Parser;

fn main() {
    let cli = recqed::cli::Cli::parse();
    std::process::exit(recqed::cli::run(cli));
}
