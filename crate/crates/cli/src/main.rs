fn main() {
    std::process::exit(nearsphere_cli::run(std::env::args_os()));
}
