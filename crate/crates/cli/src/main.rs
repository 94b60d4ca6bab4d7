fn main() {
    std::process::exit(slinkage_cli::run(std::env::args_os()));
}
