fn main() {
    std::process::exit(avgcorr_cli::run(std::env::args_os()));
}
