fn main() {
    std::process::exit(hilbgw::cli::run());
}
