fn main() {
    std::process::exit(wavepack::cli::run(std::env::args_os()));
}
