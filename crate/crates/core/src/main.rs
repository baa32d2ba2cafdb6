fn main() {
    std::process::exit(helixwg::cli::main_with_args(std::env::args_os()));
}
