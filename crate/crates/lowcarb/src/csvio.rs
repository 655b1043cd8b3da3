//! CSV tables with a header row. Numbers are written at six significant
//! digits; parse errors carry the 1-based line and column.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use lowcarb_core::scenario::CurveSet;

use crate::error::{Error, Result};

/// Rounds to six significant digits and prints the shortest text that reads
/// back to the rounded value. NaN becomes the empty cell.
pub fn sig6(x: f64) -> String {
    if x.is_nan() {
        return String::new();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{x:.5e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        return "0".into();
    }
    let mag = rounded.abs();
    if (1e-6..1e15).contains(&mag) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// Text cells under a header, remembering where they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Source file, for diagnostics.
    pub path: PathBuf,
    /// 1-based line of each row.
    pub lines: Vec<usize>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Self { header, rows: Vec::new(), path: PathBuf::new(), lines: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.lines.push(self.rows.len() + 2);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| self.error(1, 0, format!("missing column `{name}`")))
    }

    pub fn error(&self, line: usize, column: usize, message: impl Into<String>) -> Error {
        Error::Parse { path: self.path.clone(), line, column, message: message.into() }
    }

    /// The cell at `(row, col)` as a finite number.
    pub fn num(&self, row: usize, col: usize) -> Result<f64> {
        match self.num_opt(row, col)? {
            Some(v) => Ok(v),
            None => Err(self.error(self.lines[row], col + 1, "empty cell where a number is required")),
        }
    }

    /// Like [`Table::num`] but an empty cell reads as `None`.
    pub fn num_opt(&self, row: usize, col: usize) -> Result<Option<f64>> {
        let cell = self.rows[row][col].trim();
        if cell.is_empty() {
            return Ok(None);
        }
        match cell.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Some(v)),
            _ => Err(self.error(self.lines[row], col + 1, format!("`{cell}` is not a finite number"))),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let io = |e: csv::Error| Error::io(path, std::io::Error::other(e));
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::io(path, std::io::Error::other(e.to_string())))?;
        write_file(path, &bytes)
    }

    /// Reads a table, requiring every row to have as many fields as the
    /// header.
    pub fn read(path: &Path) -> Result<Table> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut r = csv::ReaderBuilder::new().has_headers(true).flexible(true).trim(csv::Trim::All).from_reader(file);
        let parse = |e: csv::Error| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::Parse { path: path.to_path_buf(), line, column: 0, message: e.to_string() }
        };
        let header: Vec<String> = r.headers().map_err(parse)?.iter().map(str::to_string).collect();
        if header.is_empty() || header.iter().all(String::is_empty) {
            return Err(Error::Parse { path: path.to_path_buf(), line: 1, column: 0, message: "missing header row".into() });
        }
        let mut table = Table { header, rows: Vec::new(), path: path.to_path_buf(), lines: Vec::new() };
        for rec in r.records() {
            let rec = rec.map_err(parse)?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            if rec.len() != table.header.len() {
                let column = rec.len().min(table.header.len()) + 1;
                return Err(table.error(line, column, format!("expected {} fields, found {}", table.header.len(), rec.len())));
            }
            table.rows.push(rec.iter().map(str::to_string).collect());
            table.lines.push(line);
        }
        Ok(table)
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(bytes).map_err(|e| Error::io(path, e))
}

/// Named per-period signals: a `period` column followed by one column per
/// signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub names: Vec<String>,
    /// `values[signal][period]`
    pub values: Vec<Vec<f64>>,
}

impl Series {
    pub fn get(&self, name: &str) -> Option<&[f64]> {
        self.names.iter().position(|n| n == name).map(|i| &self.values[i][..])
    }

    pub fn to_table(&self) -> Table {
        let mut header = vec!["period".to_string()];
        header.extend(self.names.iter().cloned());
        let mut t = Table::new(header);
        let periods = self.values.first().map_or(0, Vec::len);
        for p in 0..periods {
            let mut row = vec![p.to_string()];
            row.extend(self.values.iter().map(|v| sig6(v[p])));
            t.push(row);
        }
        t
    }

    pub fn read(path: &Path) -> Result<Series> {
        let t = Table::read(path)?;
        if t.header[0] != "period" {
            return Err(t.error(1, 1, "first column must be `period`"));
        }
        for (r, row) in t.rows.iter().enumerate() {
            if row[0].parse::<usize>().ok() != Some(r) {
                return Err(t.error(t.lines[r], 1, format!("expected period {r}, found `{}`", row[0])));
            }
        }
        let mut values = Vec::new();
        for c in 1..t.header.len() {
            values.push((0..t.rows.len()).map(|r| t.num(r, c)).collect::<Result<Vec<f64>>>()?);
        }
        for (c, v) in values.iter().enumerate() {
            if let Some(r) = v.iter().position(|x| *x < 0.0) {
                return Err(t.error(t.lines[r], c + 2, "signal values must be nonnegative"));
            }
        }
        Ok(Series { names: t.header[1..].to_vec(), values })
    }
}

/// History layout: one row per day, a `day` label column, then one column
/// per period.
pub fn history_table(set: &CurveSet) -> Table {
    let mut header = vec!["day".to_string()];
    header.extend((0..set.periods()).map(|t| format!("t{t}")));
    let mut table = Table::new(header);
    for (d, c) in set.curves.iter().enumerate() {
        let mut row = vec![format!("d{}", d + 1)];
        row.extend(c.iter().map(|&v| sig6(v)));
        table.push(row);
    }
    table
}

pub fn read_history(path: &Path, label: &str) -> Result<CurveSet> {
    let t = Table::read(path)?;
    if t.header.len() < 2 {
        return Err(t.error(1, 0, "a history needs a label column and at least one period"));
    }
    if t.rows.is_empty() {
        return Err(t.error(2, 0, "a history needs at least one day"));
    }
    let mut curves = Vec::with_capacity(t.rows.len());
    for r in 0..t.rows.len() {
        let row = (1..t.header.len()).map(|c| t.num(r, c)).collect::<Result<Vec<f64>>>()?;
        if let Some(c) = row.iter().position(|v| *v < 0.0) {
            return Err(t.error(t.lines[r], c + 2, "output must be nonnegative"));
        }
        curves.push(row);
    }
    CurveSet::new(label, curves).map_err(|e| Error::invalid(path, e.to_string()))
}
