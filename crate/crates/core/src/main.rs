fn main() {
    std::process::exit(colormatch::cli::run());
}
