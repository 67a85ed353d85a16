fn main() {
    std::process::exit(holosemi_cli::run(std::env::args()));
}
