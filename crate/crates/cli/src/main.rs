use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use mmwave_lab_cli::commands::configure_threads;
use mmwave_lab_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| {
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        run(&cli, &mut out)?;
        out.flush().map_err(|source| mmwave_lab_cli::CliError::Output {
            path: "<stdout>".into(),
            source,
        })
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mmwave-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
