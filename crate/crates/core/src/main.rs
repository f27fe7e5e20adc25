fn main() {
    let code = domino2adic::cli::run(std::env::args_os());
    std::process::exit(code);
}
