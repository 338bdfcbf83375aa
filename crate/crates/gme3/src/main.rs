use clap::Parser;

fn main() {
    let cli = gme3::cli::Cli::parse();
    match gme3::cli::run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(gme3::cli::exit_code(&e));
        }
    }
}
