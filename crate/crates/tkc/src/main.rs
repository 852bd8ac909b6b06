fn main() {
    std::process::exit(tkc::run(std::env::args_os()));
}
