use std::process::ExitCode;

fn main() -> ExitCode {
    beamnet_cli::cli::run_cli()
}
