fn main() {
    std::process::exit(planeforge::cli::run(std::env::args_os()));
}
