fn main() {
    std::process::exit(helios::cli::run(std::env::args_os()));
}
