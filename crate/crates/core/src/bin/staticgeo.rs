fn main() {
    std::process::exit(staticgeo::cli::main_with_args(std::env::args_os()));
}
