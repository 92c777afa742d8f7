fn main() {
    std::process::exit(binomial_moments::cli::run(std::env::args_os()));
}
