fn main() {
    std::process::exit(adrcode_cli::main_with(std::env::args_os()));
}
