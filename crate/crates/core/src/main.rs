fn main() {
    std::process::exit(clickboost::cli::run());
}
