fn main() {
    std::process::exit(squeezed_engine_cli::main_with_args(std::env::args_os()));
}
