fn main() {
    std::process::exit(hyperturan_cli::run(std::env::args_os()));
}
