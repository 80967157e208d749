fn main() {
    std::process::exit(pbwsplit_cli::run(std::env::args_os()));
}
