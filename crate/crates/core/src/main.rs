use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let (code, out, err) = semireal::cli::run(&args);
    std::io::stdout().write_all(out.as_bytes()).ok();
    std::io::stderr().write_all(err.as_bytes()).ok();
    std::process::exit(code);
}
