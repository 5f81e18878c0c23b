fn main() {
    std::process::exit(hk4_cli::run(std::env::args_os()));
}
