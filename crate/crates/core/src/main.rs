fn main() {
    std::process::exit(kraus_core::cli::run_from_env());
}
