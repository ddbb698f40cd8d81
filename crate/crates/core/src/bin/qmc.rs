fn main() {
    std::process::exit(qmc::cli::run(std::env::args_os()));
}
