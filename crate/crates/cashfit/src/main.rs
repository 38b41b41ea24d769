fn main() {
    std::process::exit(cashfit::cli::run(std::env::args_os()));
}
