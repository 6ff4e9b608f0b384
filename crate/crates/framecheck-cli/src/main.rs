fn main() {
    std::process::exit(framecheck_cli::dispatch(std::env::args_os()));
}
