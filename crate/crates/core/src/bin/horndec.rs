fn main() {
    std::process::exit(horndec::cli::main_from_args(std::env::args_os()));
}
