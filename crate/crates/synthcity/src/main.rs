fn main() {
    std::process::exit(synthcity::cli::run(std::env::args_os()));
}
