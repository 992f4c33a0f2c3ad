use clap::Parser;
use std::io::Write;
use std::process::ExitCode;
use susy_dirac::commands::run;
use susy_dirac::config::{Cli, RunConfig};

fn threads() -> usize {
    std::env::var("SUSY_DIRAC_THREADS").ok().and_then(|s| s.parse().ok()).filter(|&n| n > 0).unwrap_or(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads()).build().expect("thread pool");
    let outcome = pool.install(|| RunConfig::from_cli(&cli).and_then(|cfg| run(&cfg).map(|r| (cfg, r))));
    match outcome {
        Ok((cfg, (text, code))) => {
            if cfg.out.is_none() {
                let mut out = std::io::stdout().lock();
                if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
