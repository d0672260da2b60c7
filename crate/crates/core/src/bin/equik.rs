fn main() {
    std::process::exit(equik::cli::main_with_args(std::env::args_os()));
}
