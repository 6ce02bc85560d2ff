use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Parser;
use moore_tower::{execute, Cli, CommandRequest, THREADS_VAR};

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v
            .trim()
            .parse()
            .with_context(|| format!("{} must be a positive integer, got {:?}", THREADS_VAR, v))?;
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<i32> {
    init_threads()?;
    let req = CommandRequest::from_cli(cli)?;
    let start = Instant::now();
    let mut outcome = execute(&req)?;
    if cli.timing {
        outcome.report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    let text = outcome.report.render(cli.format);
    match &cli.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{}", text),
    }
    Ok(outcome.exit)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(1)
        }
    }
}
