mod config;
mod eval;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use igeo_core::GeoError;
use rayon::prelude::*;

use config::{Args, Command, RunConfig, SEED_ENV};
use eval::{Record, Value};
use igeo_core::tolerances::Verdict;

pub const EXIT_SELFTEST: u8 = 1;
pub const EXIT_DOMAIN: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_IO: u8 = 74;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Geo(#[from] GeoError),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Geo(GeoError::Domain(_) | GeoError::SingularMetric(_)) => EXIT_DOMAIN,
            CliError::Geo(GeoError::ChartMismatch { .. } | GeoError::Engine(_)) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

fn run(cfg: &RunConfig) -> Result<(Vec<Record>, u8), CliError> {
    if cfg.command == Command::Selftest {
        let records = eval::selftest(cfg)?;
        let code = if eval::selftest_passed(&records) {
            0
        } else {
            EXIT_SELFTEST
        };
        return Ok((records, code));
    }
    let per_point: Vec<_> = cfg
        .points
        .par_iter()
        .map(|p| eval::evaluate(cfg, p))
        .collect();
    let mut records = Vec::new();
    for r in per_point {
        records.extend(r?);
    }
    let mismatch = records
        .iter()
        .any(|r| matches!(&r.value, Value::Audit(a) if a.verdict == Verdict::Mismatch));
    let code = if cfg.strict && mismatch {
        EXIT_MISMATCH
    } else {
        0
    };
    Ok((records, code))
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let outcome = RunConfig::from_args(args, std::env::var(SEED_ENV).ok()).and_then(|cfg| {
        let (records, code) = run(&cfg)?;
        let meta = render::Meta {
            command: cfg.command.name(),
            chart: cfg.chart.name(),
            engine: cfg.engine.name(),
        };
        let text = render::render(cfg.format, &meta, &records);
        match &cfg.output {
            Some(path) => std::fs::write(path, text)?,
            None => std::io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(code)
    });
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("igeo: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
