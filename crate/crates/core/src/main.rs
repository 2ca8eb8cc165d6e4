fn main() -> std::process::ExitCode {
    nambu::cli::main_with_args(std::env::args_os())
}
