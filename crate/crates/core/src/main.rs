fn main() {
    std::process::exit(actcode::cli::run(std::env::args_os()));
}
