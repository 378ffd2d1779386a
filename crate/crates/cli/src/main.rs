fn main() {
    std::process::exit(askzeta_cli::run(std::env::args_os()));
}
