use clap::Parser;
use heatsym::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.report);
            std::process::exit(outcome.exit_code());
        }
        Err(e) => {
            eprintln!("heatsym: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
