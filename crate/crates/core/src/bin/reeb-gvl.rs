fn main() {
    std::process::exit(reeb_gvl::cli::run(std::env::args_os()));
}
