fn main() {
    std::process::exit(unknot_kit_cli::run(std::env::args_os()));
}
