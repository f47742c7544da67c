fn main() {
    std::process::exit(subsel::cli::run(std::env::args_os()));
}
