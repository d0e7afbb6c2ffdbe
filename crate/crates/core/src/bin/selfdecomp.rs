fn main() {
    std::process::exit(selfdecomp::cli::run(std::env::args_os()));
}
