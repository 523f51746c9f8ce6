use serde::Serialize;
use serde_json::{Map, Number, Value};

pub const SCHEMA_VERSION: &str = "1.0";

/// One command's machine-readable result.
#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub schema_version: String,
    pub command: String,
    pub input_polynomial: String,
    pub payload: Value,
    pub warnings: Vec<String>,
}

/// Rows for the `csv` and `table` renderings.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => plain17(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn human(&self) -> String {
        match self {
            Cell::Num(x) => sig10(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => "-".into(),
        }
    }
}

pub struct CommandOutput {
    pub record: OutputRecord,
    pub table: Table,
    /// `key: value` lines printed above the table.
    pub summary: Vec<(String, String)>,
}

fn non_finite(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "infinite".into()
    } else {
        "-infinite".into()
    }
}

/// 17 significant digits, exact for binary64.
fn plain17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        non_finite(x)
    }
}

/// 10 significant digits for humans.
pub fn sig10(x: f64) -> String {
    if !x.is_finite() {
        return non_finite(x);
    }
    let a = x.abs();
    if a == 0.0 {
        "0".into()
    } else if (1e-4..1e10).contains(&a) {
        // The exponent after rounding to 10 digits, so 0.99999999999 → "1.000000000".
        let e: i32 = format!("{a:.9e}").split('e').nth(1).and_then(|e| e.parse().ok()).unwrap_or(0);
        let decimals = (9 - e).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.9e}")
    }
}

/// A JSON number with 17 significant digits, or the strings `"infinite"`,
/// `"-infinite"`, `"nan"`.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        let n: Number = plain17(x).parse().expect("formatted float is valid JSON");
        Value::Number(n)
    } else {
        Value::String(non_finite(x))
    }
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn object<const N: usize>(pairs: [(&str, Value); N]) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

pub fn render_json(record: &OutputRecord) -> String {
    let mut s = serde_json::to_string_pretty(record).expect("record serializes");
    s.push('\n');
    s
}

/// RFC 4180 with a header row.
pub fn render_csv(table: &Table) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(&table.header).expect("in-memory write");
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::csv)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn render_table(out: &CommandOutput) -> String {
    let mut s = String::new();
    s.push_str(&format!("{}: {}\n", out.record.command, out.record.input_polynomial));
    for (k, v) in &out.summary {
        s.push_str(&format!("{k}: {v}\n"));
    }
    let table = &out.table;
    if !table.rows.is_empty() {
        let cells: Vec<Vec<String>> = table.rows.iter().map(|r| r.iter().map(Cell::human).collect()).collect();
        let widths: Vec<usize> = (0..table.header.len())
            .map(|i| cells.iter().map(|r| r[i].len()).chain([table.header[i].len()]).max().unwrap_or(0))
            .collect();
        let line = |items: Vec<&str>| {
            items
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        s.push_str(&line(table.header.clone()));
        s.push('\n');
        for r in &cells {
            s.push_str(&line(r.iter().map(String::as_str).collect()));
            s.push('\n');
        }
    }
    for w in &out.record.warnings {
        s.push_str(&format!("warning: {w}\n"));
    }
    s
}
