fn main() {
    std::process::exit(owc_cli::main_with_args(std::env::args_os()));
}
