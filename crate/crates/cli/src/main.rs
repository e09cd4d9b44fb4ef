fn main() {
    std::process::exit(logiclearn::run(std::env::args_os()));
}
