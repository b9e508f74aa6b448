use std::process::ExitCode;

fn main() -> ExitCode {
    zariski_cli::run()
}
