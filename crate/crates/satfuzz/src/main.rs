fn main() {
    std::process::exit(satfuzz::cli::run(std::env::args_os()));
}
