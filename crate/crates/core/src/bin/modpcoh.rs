fn main() {
    std::process::exit(modpcoh::cli::dispatch(std::env::args_os()));
}
