//! CSV tables, JSON sidecars and gnuplot scripts.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cli::Command;
use crate::error::{CliError, CliResult};

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub run: Command,
    pub out: Option<PathBuf>,
    pub gnuplot: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Sidecar {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub wall_time_s: f64,
    pub threads: usize,
    pub rows: usize,
}

impl Sidecar {
    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.into(), source })
    }
}

/// A gnuplot data series: a `using` clause, a legend title and a style.
#[derive(Debug, Clone)]
pub struct Series {
    using: String,
    title: String,
    style: &'static str,
}

impl Series {
    pub fn new(using: impl Into<String>, title: impl Into<String>, style: &'static str) -> Self {
        Self { using: using.into(), title: title.into(), style }
    }
}

#[derive(Debug, Clone)]
pub struct Plot {
    xlabel: String,
    ylabel: String,
    series: Vec<Series>,
}

impl Plot {
    pub fn new(xlabel: &str, ylabel: &str, series: Vec<Series>) -> Self {
        Self {
            xlabel: xlabel.into(),
            ylabel: ylabel.into(),
            series,
        }
    }

    pub fn script(&self, csv: &Path) -> String {
        let data = csv.display().to_string().replace('\'', "''");
        let mut text = String::new();
        text.push_str("set datafile separator ','\n");
        text.push_str("set datafile missing ''\n");
        text.push_str(&format!("set xlabel '{}'\n", self.xlabel));
        text.push_str(&format!("set ylabel '{}'\n", self.ylabel));
        text.push_str("set key outside\n");
        let clauses: Vec<String> = self
            .series
            .iter()
            .map(|s| format!("'{data}' skip 1 using {} with {} title '{}'", s.using, s.style, s.title))
            .collect();
        text.push_str(&format!("plot {}\n", clauses.join(", \\\n     ")));
        text
    }
}

/// Ordered result rows, already formatted.
#[derive(Debug, Clone)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub plot: Option<Plot>,
    /// Human-readable summary lines, printed to stderr.
    pub notes: Vec<String>,
    /// Replaces the CSV on stdout when no output file is given.
    pub stdout: Option<String>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self::with_headers(headers.iter().map(|h| h.to_string()).collect())
    }

    pub fn with_headers(headers: Vec<String>) -> Self {
        Self {
            headers,
            rows: Vec::new(),
            plot: None,
            notes: Vec::new(),
            stdout: None,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, line: String) {
        self.notes.push(line);
    }

    pub fn write_csv<W: Write>(&self, sink: W) -> CliResult<()> {
        let mut writer = csv::Writer::from_writer(sink);
        writer.write_record(&self.headers)?;
        for row in &self.rows {
            writer.write_record(row)?;
        }
        writer.flush().map_err(|source| CliError::Io { path: "<csv>".into(), source })?;
        Ok(())
    }
}

/// Shortest round-trip form of `x` after rounding to 12 significant digits,
/// so last-bit noise such as `0.7999999999999998` prints as `0.8`.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0.0".into();
    }
    if !x.is_finite() {
        return format!("{x:?}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded:?}")
}

pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

pub fn gnuplot_path(csv: &Path) -> PathBuf {
    csv.with_extension("gp")
}

pub fn write_file(path: &Path, contents: &[u8]) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.into(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        assert_eq!(num(1.0), "1.0");
        assert_eq!(num(0.7999999999999998), "0.8");
        assert_eq!(num(-0.0), "0.0");
        assert_eq!(num(0.213_939_6), "0.2139396");
        assert_eq!(num(1e-7), "1e-7");
        assert_eq!(num(f64::NAN), "NaN");
    }

    #[test]
    fn csv_quotes_fields_with_commas() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1,2".into(), "x".into()]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n\"1,2\",x\n");
    }

    #[test]
    fn script_references_csv() {
        let plot = Plot::new("s", "m", vec![Series::new("1:3", "m", "lines")]);
        let text = plot.script(Path::new("out/run.csv"));
        assert!(text.contains("'out/run.csv' skip 1 using 1:3 with lines"));
    }
}
