use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let args = csa_pricer::cli::Cli::parse();
    match csa_pricer::cli::run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
