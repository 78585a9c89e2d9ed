fn main() {
    std::process::exit(hcontact::cli::main_with_args(std::env::args_os()));
}
