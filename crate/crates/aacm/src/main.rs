fn main() {
    std::process::exit(aacm::cli::run());
}
