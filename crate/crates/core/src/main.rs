fn main() {
    std::process::exit(trisect::cli::run(std::env::args_os()));
}
