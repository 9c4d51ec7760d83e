fn main() {
    std::process::exit(mbsp::cli::run(std::env::args_os()));
}
