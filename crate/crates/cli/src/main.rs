//! `kf`: JSON-in/JSON-out front end for the kf-core library.

mod args;
mod plot;
mod report;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use serde::Serialize;

use args::Cli;

/// What a subcommand produced: a JSON document and whether it is conclusive.
pub struct Emit {
    pub json: String,
    pub inconclusive: bool,
}

impl Emit {
    pub fn ok<T: Serialize>(v: &T) -> Result<Self> {
        Ok(Emit {
            json: to_json(v)?,
            inconclusive: false,
        })
    }

    pub fn inconclusive<T: Serialize>(v: &T) -> Result<Self> {
        Ok(Emit {
            json: to_json(v)?,
            inconclusive: true,
        })
    }
}

/// Canonical serialization used for every emitted document.
pub fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).context("serializing output")
}

/// Writes `data` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, data: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(data)?;
    tmp.flush()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

#[derive(Serialize)]
struct ErrorBody {
    kind: &'static str,
    message: String,
}

#[derive(Serialize)]
struct ErrorDoc {
    error: ErrorBody,
}

fn print_error(kind: &'static str, message: String) {
    let doc = ErrorDoc {
        error: ErrorBody { kind, message },
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&doc).expect("error document serializes")
    );
}

fn error_kind(e: &anyhow::Error) -> &'static str {
    for cause in e.chain() {
        if cause.is::<report::VerifyFailure>() {
            return "verification";
        }
        if cause.is::<serde_json::Error>() {
            return "input";
        }
        if cause.is::<std::io::Error>() || cause.is::<tempfile::PersistError>() {
            return "io";
        }
        if cause.is::<args::BadArg>() {
            return "usage";
        }
    }
    "domain"
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            print_error("usage", e.render().to_string().trim_end().to_string());
            return ExitCode::from(1);
        }
    };
    let output = cli.output.clone();
    match report::run(cli.command) {
        Ok(emit) => {
            let text = format!("{}\n", emit.json);
            let written = match &output {
                Some(p) => write_atomic(p, text.as_bytes()),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                print_error("io", format!("{e:#}"));
                return ExitCode::from(1);
            }
            if emit.inconclusive {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            print_error(error_kind(&e), format!("{e:#}"));
            ExitCode::from(1)
        }
    }
}
