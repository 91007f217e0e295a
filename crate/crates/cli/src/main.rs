fn main() {
    std::process::exit(casimir_cli::commands::main_with_args(std::env::args_os()));
}
