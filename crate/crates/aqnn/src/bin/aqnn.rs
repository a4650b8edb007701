fn main() {
    std::process::exit(aqnn::cli::main_with_args(std::env::args_os()));
}
