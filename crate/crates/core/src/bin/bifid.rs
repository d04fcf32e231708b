fn main() {
    std::process::exit(bifid::cli::run(std::env::args_os()));
}
