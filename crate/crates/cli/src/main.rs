use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use opineq_cli::{exit_code, run, RunSpec};

fn load(spec: RunSpec) -> anyhow::Result<RunSpec> {
    match &spec.spec {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            Ok(serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?)
        }
        None => Ok(spec),
    }
}

fn execute(cli: RunSpec) -> anyhow::Result<u8> {
    let spec = load(cli)?;
    if spec.verbose {
        env_logger::Builder::new()
            .filter_level(log::LevelFilter::Info)
            .init();
    }
    if spec.print_spec {
        println!("{}", spec.to_json());
        return Ok(0);
    }
    log::info!("running {:?}", spec.command);
    let outcome = run(&spec)?;
    match &spec.out {
        Some(path) => std::fs::write(path, &outcome.text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", outcome.text),
    }
    if let Some(msg) = &outcome.failure {
        eprintln!("{msg}");
    }
    Ok(if outcome.passed { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = RunSpec::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
