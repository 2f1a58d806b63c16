fn main() {
    std::process::exit(l1margin::cli::run(std::env::args_os()));
}
