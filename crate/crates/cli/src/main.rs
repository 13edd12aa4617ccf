fn main() {
    std::process::exit(qchiplet_cli::main_with(std::env::args_os()));
}
