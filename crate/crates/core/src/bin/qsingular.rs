fn main() {
    std::process::exit(qsingular::cli::run(std::env::args().collect()));
}
