use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Column order of the CSV output.
pub const CSV_HEADER: [&str; 11] = [
    "algo",
    "k",
    "trial",
    "seed",
    "utility",
    "oracle_calls",
    "peak_stored",
    "passes",
    "opt_estimate_mode",
    "wall_ms",
    "params",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptMode {
    Known,
    Guessed,
}

impl OptMode {
    pub fn as_str(self) -> &'static str {
        match self {
            OptMode::Known => "known",
            OptMode::Guessed => "guessed",
        }
    }
}

impl FromStr for OptMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "known" => Ok(OptMode::Known),
            "guessed" => Ok(OptMode::Guessed),
            other => Err(Error::Parameter(format!("opt mode must be known or guessed, got '{other}'"))),
        }
    }
}

/// Metrics of one algorithm execution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algo: String,
    pub k: usize,
    pub trial: u32,
    pub seed: u64,
    pub utility: f64,
    pub oracle_calls: u64,
    pub peak_stored: usize,
    pub passes: u32,
    pub opt_estimate_mode: OptMode,
    pub wall_ms: u64,
    pub params: BTreeMap<String, String>,
}

impl RunRecord {
    /// `key=value` pairs joined by `;`, in key order.
    pub fn flat_params(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn param<T: FromStr>(&self, key: &str) -> Option<T> {
        self.params.get(key).and_then(|v| v.parse().ok())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Parameter(format!("format must be csv or json, got '{other}'"))),
        }
    }
}

pub fn write_csv<W: Write>(records: &[RunRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.algo.clone(),
            r.k.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            r.utility.to_string(),
            r.oracle_calls.to_string(),
            r.peak_stored.to_string(),
            r.passes.to_string(),
            r.opt_estimate_mode.as_str().to_string(),
            r.wall_ms.to_string(),
            r.flat_params(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(records: &[RunRecord], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, records)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Writes `records` to `path`, or to stdout when `path` is `None`.
pub fn emit_results(records: &[RunRecord], format: OutputFormat, path: Option<&Path>) -> Result<()> {
    let out: Box<dyn Write> = match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        OutputFormat::Csv => write_csv(records, out),
        OutputFormat::Json => write_json(records, out),
    }
}

/// Reads records written by [`emit_results`].
pub fn read_results(path: &Path) -> Result<Vec<RunRecord>> {
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('[') {
        return Ok(serde_json::from_str(&text)?);
    }
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    if reader.headers()?.iter().ne(CSV_HEADER) {
        return Err(Error::Data(format!("{} does not carry the results header", path.display())));
    }
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| row.get(i).unwrap_or_default();
        let num = |i: usize| -> Result<u64> {
            field(i).parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line,
                msg: format!("column {} is not an integer", CSV_HEADER[i]),
            })
        };
        let utility = field(4).parse().map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line,
            msg: "utility is not a number".into(),
        })?;
        let params = field(10)
            .split(';')
            .filter(|p| !p.is_empty())
            .map(|p| {
                let (k, v) = p.split_once('=').unwrap_or((p, ""));
                (k.to_string(), v.to_string())
            })
            .collect();
        records.push(RunRecord {
            algo: field(0).to_string(),
            k: num(1)? as usize,
            trial: num(2)? as u32,
            seed: num(3)?,
            utility,
            oracle_calls: num(5)?,
            peak_stored: num(6)? as usize,
            passes: num(7)? as u32,
            opt_estimate_mode: field(8).parse()?,
            wall_ms: num(9)?,
            params,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> RunRecord {
        RunRecord {
            algo: "salsa".into(),
            k: 3,
            trial: 1,
            seed: 43,
            utility: 7.25,
            oracle_calls: 120,
            peak_stored: 9,
            passes: 1,
            opt_estimate_mode: OptMode::Known,
            wall_ms: 0,
            params: [("opt".to_string(), "9".to_string()), ("preset".into(), "icml".into())].into(),
        }
    }

    #[test]
    fn empty_csv_is_header_only() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "algo,k,trial,seed,utility,oracle_calls,peak_stored,passes,opt_estimate_mode,wall_ms,params\n"
        );
    }

    #[test]
    fn csv_row_layout() {
        let mut buf = Vec::new();
        write_csv(&[record()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "salsa,3,1,43,7.25,120,9,1,known,0,opt=9;preset=icml");
    }

    #[test]
    fn json_and_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for (format, name) in [(OutputFormat::Json, "r.json"), (OutputFormat::Csv, "r.csv")] {
            let path = dir.path().join(name);
            emit_results(&[record()], format, Some(&path)).unwrap();
            assert_eq!(read_results(&path).unwrap(), vec![record()]);
        }
        let json = serde_json::to_value(record()).unwrap();
        let keys: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = CSV_HEADER.to_vec();
        expected.sort_unstable();
        let mut keys = keys;
        keys.sort_unstable();
        assert_eq!(keys, expected);
    }

    #[test]
    fn unwritable_path_errors() {
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("missing").join("out.csv");
        assert!(emit_results(&[], OutputFormat::Csv, Some(&bad)).is_err());
    }
}
