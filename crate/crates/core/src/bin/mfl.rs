fn main() {
    std::process::exit(modular_flow::cli::main_with_args(std::env::args_os()));
}
