fn main() {
    std::process::exit(polyhom_cli::run(std::env::args()));
}
