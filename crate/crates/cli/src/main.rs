fn main() {
    std::process::exit(pennycrack_cli::main_with_args(std::env::args_os()));
}
