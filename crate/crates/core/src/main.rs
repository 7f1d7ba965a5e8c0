fn main() {
    std::process::exit(hankelforge::cli::run());
}
