fn main() {
    std::process::exit(kbackup::cli::main_with_args(std::env::args_os()));
}
