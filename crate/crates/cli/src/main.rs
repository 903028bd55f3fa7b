use std::process::ExitCode;

use clap::Parser;
use tactics_cli::{emit, execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli).and_then(|out| emit(&cli.config, &out).map(|()| out.exit_code()));
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
