fn main() {
    std::process::exit(perturbed_fpt::cli::run(std::env::args_os()));
}
