fn main() {
    std::process::exit(diffkde::cli::main_with_args(std::env::args_os()));
}
