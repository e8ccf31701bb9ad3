fn main() {
    std::process::exit(orbit_strata::cli::run());
}
