fn main() {
    std::process::exit(veritas::cli::main());
}
