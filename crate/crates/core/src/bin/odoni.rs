fn main() {
    std::process::exit(odoni::cli::run(std::env::args_os()));
}
