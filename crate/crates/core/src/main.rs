fn main() {
    std::process::exit(hybridspace::cli::run(std::env::args_os()));
}
