fn main() -> std::process::ExitCode {
    lomse_cli::main_with_args(std::env::args_os())
}
