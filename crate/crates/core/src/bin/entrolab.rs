fn main() {
    std::process::exit(entrolab::cli::run(std::env::args_os()));
}
