fn main() {
    std::process::exit(proxypoint::cli::main_with_args(std::env::args_os()));
}
