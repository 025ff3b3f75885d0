use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let exit = alcft::cli::main_with(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(exit as u8)
}
