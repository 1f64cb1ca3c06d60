use std::process::ExitCode;

use clap::Parser;
use tropjac::cli::{self, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TROPJAC_LOG", "warn")).init();
    let args = Cli::parse();
    match cli::run(&args) {
        Ok(output) => match output.destination {
            Some(path) => match std::fs::write(&path, output.text) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {}: {e}", path.display());
                    ExitCode::from(3)
                }
            },
            None => {
                print!("{}", output.text);
                ExitCode::SUCCESS
            }
        },
        Err(e) => {
            log::debug!("exit code {}", e.code);
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
