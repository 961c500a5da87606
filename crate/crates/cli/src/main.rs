fn main() {
    std::process::exit(fastimd_cli::cli::main_with_args(std::env::args_os()));
}
