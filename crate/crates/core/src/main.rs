fn main() {
    std::process::exit(dgbn::cli::run(std::env::args_os()));
}
