fn main() {
    std::process::exit(singular_heat::cli::main_with_args(std::env::args_os()));
}
