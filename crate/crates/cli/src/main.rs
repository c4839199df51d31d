fn main() {
    std::process::exit(svcp_cli::run(std::env::args_os()));
}
