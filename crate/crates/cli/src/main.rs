fn main() {
    std::process::exit(ini_cli::run(std::env::args_os()));
}
