fn main() {
    std::process::exit(toda_core::cli::run(std::env::args_os()));
}
