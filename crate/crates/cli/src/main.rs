fn main() {
    std::process::exit(coarsemap::main_with_args(std::env::args_os()));
}
