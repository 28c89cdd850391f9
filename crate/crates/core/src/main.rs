fn main() {
    std::process::exit(zec::cli::run_from_env());
}
