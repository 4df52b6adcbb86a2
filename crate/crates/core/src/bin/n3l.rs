fn main() {
    std::process::exit(n3l::cli::run(std::env::args_os()));
}
