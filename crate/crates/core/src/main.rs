fn main() {
    std::process::exit(krlab::cli::run());
}
