fn main() {
    std::process::exit(geoquant::cli::run(std::env::args_os()));
}
