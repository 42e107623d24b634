fn main() {
    std::process::exit(prabhakar::cli::run(std::env::args_os()));
}
