fn main() {
    std::process::exit(ere_stab::cli::run(std::env::args_os()));
}
