fn main() {
    let code = gl3_cli::main_with_args(std::env::args().collect());
    std::process::exit(code);
}
