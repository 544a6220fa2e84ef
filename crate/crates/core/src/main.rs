fn main() {
    std::process::exit(gkpsim::cli::main_with_args(std::env::args_os()));
}
