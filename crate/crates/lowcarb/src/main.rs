use std::process::ExitCode;

fn main() -> ExitCode {
    lowcarb::cli::main()
}
