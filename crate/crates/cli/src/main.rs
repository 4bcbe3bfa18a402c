mod args;
mod commands;
mod config;
mod manifest;
mod render;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use diophant::Error;

use args::{Cli, Command};
use config::Settings;
use manifest::{digest, strip_manifest_flag, RunManifest};

/// A diagnostic plus the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub msg: String,
}

impl Failure {
    pub fn usage(msg: String) -> Self {
        Failure { code: 2, msg }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::PrecisionExhausted { .. }
            | Error::BoxTooLarge { .. }
            | Error::GridTooLarge { .. }
            | Error::ThresholdViolated { .. } => 3,
            Error::VerificationFailed(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

fn replay(file: &std::path::Path, verify: bool) -> Result<String, Failure> {
    let m = RunManifest::read(file)?;
    let cli = Cli::try_parse_from(std::iter::once("diophant".to_string()).chain(m.argv.clone()))
        .map_err(|e| Failure::usage(format!("manifest argv does not parse: {e}")))?;
    if matches!(cli.command, Command::Replay { .. }) {
        return Err(Failure::usage("a manifest cannot replay another replay".into()));
    }
    let out = commands::run(&cli.command, &m.settings()?)?;
    if verify && digest(&out.text) != m.output_sha256 {
        return Err(Failure {
            code: 1,
            msg: "replayed output differs from the manifest digest".into(),
        });
    }
    Ok(out.text)
}

fn run(cli: &Cli) -> Result<String, Failure> {
    if let Command::Replay { file, verify } = &cli.command {
        if cli.global.manifest.is_some() {
            return Err(Failure::usage("--manifest cannot be combined with replay".into()));
        }
        return replay(file, *verify);
    }
    let settings = Settings::resolve(&cli.global)?;
    let start = Instant::now();
    let out = commands::run(&cli.command, &settings)?;
    if let Some(path) = &cli.global.manifest {
        let args: Vec<String> = std::env::args().skip(1).collect();
        RunManifest::new(
            strip_manifest_flag(&args),
            &settings,
            out.input,
            start.elapsed(),
            &out.text,
        )
        .write(path)?;
    }
    Ok(out.text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
