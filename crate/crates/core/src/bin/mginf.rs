fn main() {
    std::process::exit(mginf::cli::run(std::env::args_os()));
}
