fn main() {
    std::process::exit(modflow::cli::main_with(std::env::args_os()));
}
