fn main() {
    std::process::exit(nuccr_cli::run_cli(std::env::args_os()));
}
