fn main() {
    std::process::exit(bridge_loe_cli::run(std::env::args_os()));
}
