fn main() {
    std::process::exit(dlal::cli::main());
}
