use clap::Parser;

fn main() {
    let cli = immlab::cli::Cli::parse();
    let stdout = std::io::stdout();
    if let Err(e) = immlab::cli::run(cli, &mut stdout.lock()) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
