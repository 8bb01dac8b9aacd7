fn main() {
    std::process::exit(beltrami_lab::cli::run(std::env::args()));
}
