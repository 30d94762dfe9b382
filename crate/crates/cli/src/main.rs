fn main() {
    std::process::exit(tropical_cli::run(std::env::args_os()));
}
