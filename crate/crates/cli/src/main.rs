use std::io::Write;

use clap::Parser;
use superdyn_cli::{configure_threads, run, Cli};

fn main() {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| run(cli));
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let mut text = out.stdout;
            if !text.ends_with('\n') {
                text.push('\n');
            }
            // Ignore a closed pipe (`| head`).
            let _ = stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush());
            std::process::exit(out.code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
