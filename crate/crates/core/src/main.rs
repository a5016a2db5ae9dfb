fn main() {
    std::process::exit(subsep::cli::dispatch(std::env::args_os()));
}
