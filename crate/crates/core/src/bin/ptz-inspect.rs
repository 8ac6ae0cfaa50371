fn main() {
    std::process::exit(ptz_inspect::cli::run_from(std::env::args_os()));
}
