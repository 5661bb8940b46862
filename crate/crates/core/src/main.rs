use std::process::ExitCode;

use wigner_negativity::cli_io::{self, Invocation, EXIT_USAGE};

fn threads_from_env() -> Result<usize, String> {
    match std::env::var("WIGNER_THREADS") {
        Err(_) => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("WIGNER_THREADS='{v}' is not a nonnegative integer")),
    }
}

fn main() -> ExitCode {
    let threads = match threads_from_env() {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("wigner: {msg}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    if threads > 0 {
        // Only fails if a global pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    let config = match cli_io::parse_invocation(std::env::args().skip(1)) {
        Ok(Invocation::Run(c)) => c,
        Ok(Invocation::Info(text)) => {
            print!("{text}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("wigner: {e}");
            return ExitCode::from(cli_io::exit_code(&e) as u8);
        }
    };
    match cli_io::run(&config) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("wigner: {e}");
            ExitCode::from(cli_io::exit_code(&e) as u8)
        }
    }
}
