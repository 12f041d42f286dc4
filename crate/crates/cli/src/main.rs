fn main() {
    std::process::exit(kdvlab::run(std::env::args_os()));
}
