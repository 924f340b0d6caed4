use std::io::Write;

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let mut stdout = std::io::stdout().lock();
    let code = lexorder::cli::run(&argv, &mut stdout);
    let _ = stdout.flush();
    std::process::exit(code);
}
