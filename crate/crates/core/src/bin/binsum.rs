use std::io::{self, Write};

fn main() {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = binsum::cli::run(std::env::args_os(), &mut out, &mut io::stderr());
    out.flush().ok();
    std::process::exit(code);
}
