fn main() {
    std::process::exit(eqmeasure::cli::run(std::env::args_os()));
}
