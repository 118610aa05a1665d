fn main() {
    std::process::exit(coxfano::cli::run());
}
