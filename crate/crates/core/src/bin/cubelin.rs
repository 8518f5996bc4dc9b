fn main() {
    let code = cubelin::cli::run(std::env::args_os());
    std::process::exit(code);
}
