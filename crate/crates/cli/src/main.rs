fn main() {
    std::process::exit(choresolver_cli::run(std::env::args_os()));
}
