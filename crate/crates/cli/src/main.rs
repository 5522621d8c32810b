fn main() {
    std::process::exit(voi_cli::run(std::env::args_os()));
}
