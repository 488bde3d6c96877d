//! Runs the `verify` subcommand in-process and reports the exit code.

fn main() {
    let code = lindy::cli::main_with_args([
        "lindy", "verify", "--p", "1", "--delta", "const:2", "--trials", "50", "--format", "csv",
    ]);
    eprintln!("exit code {code}");
    std::process::exit(code);
}
