fn main() {
    std::process::exit(polycc::cli::run_with_args(std::env::args_os()));
}
