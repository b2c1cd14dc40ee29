fn main() {
    std::process::exit(hardy::cli::run(std::env::args_os()));
}
