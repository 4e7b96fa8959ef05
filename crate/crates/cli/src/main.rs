use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use mesh_array_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    let mut stdout = std::io::stdout().lock();
    if stdout
        .write_all(&result.stdout)
        .and_then(|_| stdout.flush())
        .is_err()
    {
        return ExitCode::from(2);
    }
    eprint!("{}", result.stderr);
    ExitCode::from(result.exit_code as u8)
}
