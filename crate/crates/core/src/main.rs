fn main() {
    tdascan::cli::init_logging();
    std::process::exit(tdascan::cli::run(std::env::args_os()));
}
