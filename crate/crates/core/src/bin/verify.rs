fn main() {
    std::process::exit(polarsym::cli::main_with_args(std::env::args_os()));
}
