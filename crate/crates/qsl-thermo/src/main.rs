fn main() {
    std::process::exit(qsl_thermo::cli::main());
}
