fn main() {
    std::process::exit(fdfisher::cli::run(std::env::args_os()));
}
