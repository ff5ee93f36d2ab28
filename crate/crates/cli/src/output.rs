//! Tables, their CSV/JSON rendering and atomic file output.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use crate::error::CliError;

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Num(f64),
    /// Rendered as `inf`.
    Inf,
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Num(v) => Some(*v),
            Cell::Inf => Some(f64::INFINITY),
            Cell::Text(_) => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format_number(*v),
            Cell::Inf => "inf".to_owned(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Num(v) => json!(format_number(*v).parse::<f64>().expect("formatted number parses")),
            Cell::Inf => json!("inf"),
            Cell::Text(s) => json!(s),
        }
    }

    fn parse(field: &str) -> Cell {
        if field == "inf" {
            return Cell::Inf;
        }
        if let Ok(v) = field.parse::<u64>() {
            return Cell::Int(v);
        }
        match field.parse::<f64>() {
            Ok(v) => Cell::Num(v),
            Err(_) => Cell::Text(field.to_owned()),
        }
    }
}

/// `%.9g`-style rendering: nine significant digits, trailing zeros trimmed,
/// independent of locale.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s.to_owned()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    /// Ordered `key=value` pairs of the header line. Values carry no spaces.
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            metadata: Vec::new(),
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        let value = value.to_string().replace(char::is_whitespace, "_");
        self.metadata.push((key.to_owned(), value));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("#");
        for (k, v) in &self.metadata {
            out.push_str(&format!(" {k}={v}"));
        }
        out.push('\n');
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// Same content as the CSV: `metadata`, `columns`, then one array per row.
    pub fn to_json(&self) -> String {
        let meta: serde_json::Map<String, Value> =
            self.metadata.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let mut out = format!(
            "{{\n\"metadata\": {},\n\"columns\": {},\n\"rows\": [",
            Value::Object(meta),
            json!(self.columns)
        );
        for (i, row) in self.rows.iter().enumerate() {
            let cells: Vec<Value> = row.iter().map(Cell::to_json).collect();
            out.push_str(if i == 0 { "\n" } else { ",\n" });
            out.push_str(&Value::Array(cells).to_string());
        }
        out.push_str("\n]\n}\n");
        out
    }

    pub fn render(&self, format: TableFormat) -> String {
        match format {
            TableFormat::Csv => self.to_csv(),
            TableFormat::Json => self.to_json(),
        }
    }

    /// Reads back the output of [`Table::to_csv`].
    pub fn parse_csv(text: &str) -> Result<Self, CliError> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .and_then(|l| l.strip_prefix('#'))
            .ok_or_else(|| CliError::config("missing '#' metadata line"))?;
        let metadata = header
            .split_whitespace()
            .map(|kv| {
                kv.split_once('=')
                    .map(|(k, v)| (k.to_owned(), v.to_owned()))
                    .ok_or_else(|| CliError::config(format!("bad metadata field '{kv}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let columns: Vec<String> = lines
            .next()
            .ok_or_else(|| CliError::config("missing column header"))?
            .split(',')
            .map(str::to_owned)
            .collect();
        let mut rows = Vec::new();
        for line in lines {
            let row: Vec<Cell> = line.split(',').map(Cell::parse).collect();
            if row.len() != columns.len() {
                return Err(CliError::config(format!("row '{line}' has {} fields", row.len())));
            }
            rows.push(row);
        }
        Ok(Self {
            metadata,
            columns,
            rows,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

impl TableFormat {
    pub fn extension(self) -> &'static str {
        match self {
            TableFormat::Csv => "csv",
            TableFormat::Json => "json",
        }
    }
}

/// Writes `contents` to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| CliError::config(format!("'{}' is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    result.map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::io(path, e)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_number(3.0), "3");
        assert_eq!(format_number(1.0 / 3.0), "0.333333333");
        assert_eq!(format_number(28.0 / 3.0), "9.33333333");
        assert_eq!(format_number(123456789.4), "123456789");
        assert_eq!(format_number(1234567890.0), "1.23456789e9");
        assert_eq!(format_number(-2.5e-7), "-2.5e-7");
        assert_eq!(format_number(1e-6), "1e-6");
        assert_eq!(format_number(1e-4), "0.0001");
        assert_eq!(format_number(0.0), "0");
    }

    #[test]
    fn csv_round_trip() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.meta("experiment", "case3").meta("threshold", format_number(1e-6));
        t.push(vec![Cell::Int(3), Cell::Num(0.1), Cell::Inf]);
        t.push(vec![Cell::Int(4), Cell::Num(-7.25), Cell::Text("x".into())]);
        let back = Table::parse_csv(&t.to_csv()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.meta_value("threshold"), Some("1e-6"));
    }

    #[test]
    fn json_mirrors_csv() {
        let mut t = Table::new(&["q", "m"]);
        t.meta("view", "e0");
        t.push(vec![Cell::Inf, Cell::Num(0.25)]);
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["metadata"]["view"], "e0");
        assert_eq!(v["columns"][1], "m");
        assert_eq!(v["rows"][0][0], "inf");
        assert_eq!(v["rows"][0][1], 0.25);
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, "one").unwrap();
        write_atomic(&path, "two").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
        assert!(write_atomic(&dir.path().join("missing/out.csv"), "x").is_err());
    }
}
