fn main() {
    std::process::exit(hecke_shuffle::cli::run_main(std::env::args_os()));
}
