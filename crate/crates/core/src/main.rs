fn main() {
    std::process::exit(thermalops::cli::run(std::env::args_os()));
}
