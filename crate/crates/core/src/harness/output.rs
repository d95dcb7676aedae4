//! CSV tables with a `#` metadata header, and JSON documents.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::RunConfig;
use crate::calibration::{Abscissa, ScanRecord};
use crate::error::{Error, Result};

const CONFIG_PREFIX: &str = "# config | ";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Written with 17 significant digits so it parses back bit-exactly.
    Real(f64),
    Count(u64),
    Text(String),
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            Cell::Real(x) => format_real(*x, out),
            Cell::Count(n) => {
                let _ = write!(out, "{n}");
            }
            Cell::Text(s) => out.push_str(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Count(n)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Count(n as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Count(u64::from(b))
    }
}

pub fn format_real(x: f64, out: &mut String) {
    if x.is_finite() {
        let _ = write!(out, "{x:.16e}");
    } else if x.is_nan() {
        out.push_str("nan");
    } else if x > 0.0 {
        out.push_str("inf");
    } else {
        out.push_str("-inf");
    }
}

pub fn parse_real(s: &str) -> Option<f64> {
    match s {
        "nan" => Some(f64::NAN),
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => s.parse().ok(),
    }
}

/// One CSV file: named columns, typed cells, free-form metadata lines.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: String,
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Self {
            command: command.to_string(),
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Renders the table; the config snapshot and crate version lead the header.
    pub fn render(&self, config: &RunConfig) -> Result<String> {
        let mut out = String::new();
        let _ = writeln!(out, "# superposition-xor {}", crate::VERSION);
        let _ = writeln!(out, "# command = {}", self.command);
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k} = {v}");
        }
        for line in snapshot(config)?.lines() {
            let _ = writeln!(out, "{CONFIG_PREFIX}{line}");
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.render(&mut out);
            }
            out.push('\n');
        }
        Ok(out)
    }

    pub fn write(&self, dir: &Path, name: &str, config: &RunConfig) -> Result<PathBuf> {
        let path = dir.join(name);
        write_file(&path, self.render(config)?.as_bytes())?;
        Ok(path)
    }
}

/// Parsed form of a table file.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTable {
    pub meta: Vec<(String, String)>,
    pub config: Option<RunConfig>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ParsedTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut meta = Vec::new();
        let mut config_text = String::new();
        let mut columns = None;
        let mut rows = Vec::new();
        for line in text.lines() {
            if let Some(rest) = line.strip_prefix(CONFIG_PREFIX) {
                config_text.push_str(rest);
                config_text.push('\n');
            } else if let Some(rest) = line.strip_prefix("# ") {
                if let Some((k, v)) = rest.split_once(" = ") {
                    meta.push((k.to_string(), v.to_string()));
                }
            } else if line.is_empty() || line.starts_with('#') {
                continue;
            } else if columns.is_none() {
                columns = Some(line.split(',').map(str::to_string).collect::<Vec<_>>());
            } else {
                rows.push(line.split(',').map(str::to_string).collect());
            }
        }
        let config = if config_text.is_empty() {
            None
        } else {
            Some(RunConfig::from_toml(&config_text)?)
        };
        Ok(Self {
            meta,
            config,
            columns: columns.ok_or_else(|| Error::Serde("table has no header row".into()))?,
            rows,
        })
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// Config as embedded in outputs. Worker count and output directory do not
/// affect results and are reset so files compare byte-for-byte across them.
pub fn snapshot(config: &RunConfig) -> Result<String> {
    let defaults = RunConfig::default();
    RunConfig {
        workers: defaults.workers,
        out_dir: defaults.out_dir,
        ..config.clone()
    }
    .to_toml()
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    version: &'a str,
    command: &'a str,
    config: RunConfig,
    result: &'a T,
}

/// Writes `{version, command, config, result}` as pretty JSON.
pub fn write_json<T: Serialize>(dir: &Path, name: &str, command: &str, config: &RunConfig, result: &T) -> Result<PathBuf> {
    let defaults = RunConfig::default();
    let doc = Document {
        version: crate::VERSION,
        command,
        config: RunConfig {
            workers: defaults.workers,
            out_dir: defaults.out_dir,
            ..config.clone()
        },
        result,
    };
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Serde(e.to_string()))?;
    text.push('\n');
    let path = dir.join(name);
    write_file(&path, text.as_bytes())?;
    Ok(path)
}

/// Scan as a table: abscissa column, then one count column per channel.
pub fn scan_table(command: &str, scan: &ScanRecord) -> Table {
    let mut cols = vec![scan.abscissa_kind.column_name()];
    cols.extend(scan.channels.iter().map(String::as_str));
    let mut t = Table::new(command, &cols);
    t.meta("integration_time_s", {
        let mut s = String::new();
        format_real(scan.integration_time, &mut s);
        s
    });
    for (x, row) in scan.abscissa.iter().zip(&scan.counts) {
        let mut cells = vec![Cell::Real(*x)];
        cells.extend(row.iter().map(|&c| Cell::Count(c)));
        t.push(cells);
    }
    t
}

pub fn read_scan(text: &str) -> Result<ScanRecord> {
    let parsed = ParsedTable::parse(text)?;
    let bad = |what: &str| Error::Serde(format!("scan table: {what}"));
    let kind = parsed
        .columns
        .first()
        .and_then(|c| Abscissa::from_column_name(c))
        .ok_or_else(|| bad("unknown abscissa column"))?;
    let integration_time = parsed
        .meta_value("integration_time_s")
        .and_then(parse_real)
        .ok_or_else(|| bad("missing integration_time_s"))?;
    let mut abscissa = Vec::with_capacity(parsed.rows.len());
    let mut counts = Vec::with_capacity(parsed.rows.len());
    for row in &parsed.rows {
        if row.len() != parsed.columns.len() {
            return Err(bad("ragged row"));
        }
        abscissa.push(parse_real(&row[0]).ok_or_else(|| bad("bad abscissa value"))?);
        counts.push(
            row[1..]
                .iter()
                .map(|c| c.parse::<u64>().map_err(|_| bad("counts must be non-negative integers")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let scan = ScanRecord {
        abscissa_kind: kind,
        abscissa,
        channels: parsed.columns[1..].to_vec(),
        counts,
        integration_time,
    };
    scan.validate()?;
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn seventeen_digits() {
        let mut s = String::new();
        format_real(0.1, &mut s);
        assert_eq!(s, "1.0000000000000001e-1");
        assert_eq!(parse_real(&s), Some(0.1));
    }

    #[test]
    fn table_carries_config_and_version() {
        let cfg = RunConfig {
            seed: 99,
            workers: 7,
            ..Default::default()
        };
        let mut t = Table::new("test", &["p", "n"]);
        t.meta("note", "hello");
        t.push(vec![0.5.into(), 3u64.into()]);
        let text = t.render(&cfg).unwrap();
        let parsed = ParsedTable::parse(&text).unwrap();
        assert_eq!(parsed.meta_value("note"), Some("hello"));
        assert_eq!(parsed.meta[0].0, "command");
        assert!(text.starts_with(&format!("# superposition-xor {}", crate::VERSION)));
        let back = parsed.config.unwrap();
        assert_eq!(back.seed, 99);
        assert_eq!(back.workers, 0);
        assert_eq!(parsed.rows, vec![vec!["5.0000000000000000e-1".to_string(), "3".to_string()]]);
    }

    #[test]
    fn scan_round_trip() {
        let scan = ScanRecord {
            abscissa_kind: Abscissa::Volts,
            abscissa: vec![0.0, 0.1, 0.30000000000000004],
            channels: vec!["A0B0".into(), "A1B1".into()],
            counts: vec![vec![1, 2], vec![3, 4], vec![5, 6]],
            integration_time: 10.0,
        };
        let text = scan_table("calibrate", &scan).render(&RunConfig::default()).unwrap();
        assert_eq!(read_scan(&text).unwrap(), scan);
    }

    proptest! {
        #[test]
        fn reals_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
            let mut s = String::new();
            format_real(x, &mut s);
            prop_assert_eq!(parse_real(&s).unwrap().to_bits(), x.to_bits());
        }
    }
}
