fn main() {
    env_logger::init();
    let (code, out) = abmod::cli::run(std::env::args_os());
    if code == 0 {
        println!("{out}");
    } else {
        eprintln!("{out}");
    }
    std::process::exit(code);
}
