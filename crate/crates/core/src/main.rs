fn main() {
    std::process::exit(eulerint::cli::run());
}
