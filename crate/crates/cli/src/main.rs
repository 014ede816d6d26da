fn main() {
    std::process::exit(fano_qc::run(std::env::args_os()));
}
