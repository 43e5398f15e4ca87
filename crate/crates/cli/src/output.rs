//! CSV and JSON writers for experiment results.

use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::experiments::{ExperimentConfig, Outcome, TrialRecord};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// `# orichrom v<version> seed=<seed>` followed by RFC 4180 rows, one per
/// trial.
pub fn write_csv<W: Write>(mut w: W, seed: u64, records: &[TrialRecord]) -> io::Result<()> {
    write!(w, "# orichrom v{VERSION} seed={seed}\r\n")?;
    let mut c = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(w);
    for r in records {
        c.serialize(r)?;
    }
    c.flush()
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    version: &'static str,
    config: &'a ExperimentConfig,
    #[serde(flatten)]
    outcome: &'a Outcome,
}

pub fn write_json<W: Write>(w: W, cfg: &ExperimentConfig, outcome: &Outcome) -> io::Result<()> {
    serde_json::to_writer_pretty(w, &JsonDocument { version: VERSION, config: cfg, outcome })?;
    Ok(())
}

pub fn write_outcome<W: Write>(mut w: W, format: OutputFormat, cfg: &ExperimentConfig, outcome: &Outcome) -> io::Result<()> {
    match format {
        OutputFormat::Csv => write_csv(&mut w, cfg.seed, &outcome.records)?,
        OutputFormat::Json => {
            write_json(&mut w, cfg, outcome)?;
            writeln!(w)?;
        }
    }
    w.flush()
}

/// The directory that will hold `path` must already exist.
pub fn check_output_path(path: &Path) -> Result<(), String> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    if parent.is_dir() {
        Ok(())
    } else {
        Err(format!("output directory {} does not exist", parent.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(trial: u64) -> TrialRecord {
        TrialRecord {
            trial,
            seed: 5,
            n: 10,
            arcs: 10,
            simple: true,
            attempts: Some(2),
            chi: Some(4),
            colourable: None,
            has_5_cycle: Some(false),
            clique: None,
            colours: None,
            runtime_us: None,
        }
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_csv(&mut buf, 5, &[record(0), record(1)]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let mut lines = s.split("\r\n");
        assert_eq!(lines.next().unwrap(), format!("# orichrom v{VERSION} seed=5"));
        assert_eq!(lines.next().unwrap(), "trial,seed,n,arcs,simple,attempts,chi,colourable,has_5_cycle,clique,colours,runtime_us");
        assert_eq!(lines.next().unwrap(), "0,5,10,10,true,2,4,,false,,,");
    }

    #[test]
    fn output_directory_must_exist() {
        assert!(check_output_path(Path::new("out.csv")).is_ok());
        assert!(check_output_path(Path::new("/definitely/not/here/out.csv")).is_err());
    }
}
