fn main() {
    std::process::exit(qlm::cli::main_with(std::env::args_os()));
}
