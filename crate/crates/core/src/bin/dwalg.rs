fn main() {
    std::process::exit(dwalg::cli::run(std::env::args_os()));
}
