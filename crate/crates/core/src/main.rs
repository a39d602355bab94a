fn main() {
    std::process::exit(edm::cli::run(std::env::args_os()));
}
