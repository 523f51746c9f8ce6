//! The `mahlerk` command line.
//!
//! ```text
//! mahlerk roots|measure|limit|converge "<poly>" [--k K] [--kmax K]
//!         [--method quad|jensen|bruteforce] [--tol T] [--delta D]
//!         [--format json|csv|table] [--out FILE]
//! ```
//!
//! Exit codes: 0 success, 2 parse error, 3 numeric failure, 4 ambiguous
//! unit-circle classification, 5 usage error.

mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::asymptotics::{convergence_study, limit_formula, LimitValue, DEFAULT_K_MAX};
use crate::laurent::{
    classify_circle_roots, find_roots_with, parse_polynomial, LaurentPolynomial, WindowPolicy,
    DEFAULT_CIRCLE_TOLERANCE,
};
use crate::measure::{
    jensen_measure, mk_bruteforce_with, mk_quadrature, MeasureStatus, QuadratureConfig, RegionKind, MAX_LEVEL,
};
use crate::Error;

pub use output::{num, render_csv, render_json, render_table, sig10, Cell, CommandOutput, OutputRecord, Table, SCHEMA_VERSION};
use output::{object, opt_num};

/// The JSON Schema every `--format json` record validates against.
pub const OUTPUT_SCHEMA: &str = include_str!("../../schema/output.schema.json");

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_AMBIGUOUS: i32 = 4;
pub const EXIT_USAGE: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "mahlerk", version, about = "Higher Mahler measures and their large-k limit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Roots with multiplicities, unit-circle classification and |P'(z_j)|.
    Roots(Common),
    /// m_k(P) by quadrature, the brute-force oracle, or Jensen's formula.
    Measure {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Method::Quad)]
        method: Method,
        /// Refinement level of the brute-force oracle.
        #[arg(long, default_value_t = 10)]
        level: u32,
    },
    /// lim |m_k(P)|/k! as k → ∞.
    Limit(Common),
    /// |m_k(P)|/k! for k = 1..=kmax against the limit.
    Converge {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        kmax: usize,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Polynomial in z, e.g. "(z-1)^2*(z+2)" or "z^-1 + (1+2i)*z".
    poly: String,
    /// Unit-circle classification tolerance.
    #[arg(long, default_value_t = DEFAULT_CIRCLE_TOLERANCE)]
    tol: f64,
    /// Fixed window half-width instead of the automatic choice.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the output to FILE instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Quad,
    Jensen,
    Bruteforce,
}

impl Method {
    fn as_str(self) -> &'static str {
        match self {
            Method::Quad => "quad",
            Method::Jensen => "jensen",
            Method::Bruteforce => "bruteforce",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// A failure with its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => EXIT_PARSE,
            Error::AmbiguousClassification { .. } => EXIT_AMBIGUOUS,
            _ => EXIT_NUMERIC,
        };
        CliError { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError { code: EXIT_USAGE, message: message.into() }
}

/// Options shared by the command functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub tolerance: f64,
    pub delta: Option<f64>,
}

impl Default for Options {
    fn default() -> Self {
        Options { tolerance: DEFAULT_CIRCLE_TOLERANCE, delta: None }
    }
}

impl Options {
    fn validate(&self) -> Result<(), CliError> {
        if !(self.tolerance > 0.0 && self.tolerance < 0.5) {
            return Err(usage("--tol must lie in (0, 0.5)"));
        }
        if let Some(d) = self.delta {
            if !(d > 0.0 && d < 0.5) {
                return Err(usage("--delta must lie in (0, 0.5)"));
            }
        }
        Ok(())
    }

    fn config(&self) -> QuadratureConfig {
        QuadratureConfig {
            circle_tolerance: self.tolerance,
            window: self.delta.map_or(WindowPolicy::Auto, WindowPolicy::Fixed),
            ..Default::default()
        }
    }
}

fn parse(poly: &str) -> Result<LaurentPolynomial, CliError> {
    Ok(parse_polynomial(poly)?)
}

fn record(command: &str, p: &LaurentPolynomial, payload: Value, warnings: Vec<String>) -> OutputRecord {
    OutputRecord {
        schema_version: SCHEMA_VERSION.into(),
        command: command.into(),
        input_polynomial: p.to_string(),
        payload,
        warnings,
    }
}

/// `roots`: distinct roots, multiplicities, circle classification, `|P'|`.
pub fn cmd_roots(poly: &str, opts: &Options) -> Result<CommandOutput, CliError> {
    opts.validate()?;
    let p = parse(poly)?;
    let (lift, shift) = p.to_ordinary()?;
    // Surfaces the ambiguity error before anything is printed.
    classify_circle_roots(&p, opts.tolerance)?;
    let roots = find_roots_with(&p, opts.tolerance)?;
    let dp = p.derivative();
    let mut table = Table {
        header: vec!["re", "im", "modulus", "multiplicity", "on_unit_circle", "angle", "derivative_abs", "residual"],
        rows: Vec::new(),
    };
    let items: Vec<Value> = roots
        .iter()
        .map(|r| {
            let d = dp.evaluate(r.value).map(|v| v.norm()).unwrap_or(f64::NAN);
            table.rows.push(vec![
                Cell::Num(r.value.re),
                Cell::Num(r.value.im),
                Cell::Num(r.value.norm()),
                Cell::Int(r.multiplicity as i64),
                Cell::Text(r.on_unit_circle.to_string()),
                r.angle.map_or(Cell::Empty, Cell::Num),
                Cell::Num(d),
                Cell::Num(r.residual),
            ]);
            object([
                ("re", num(r.value.re)),
                ("im", num(r.value.im)),
                ("modulus", num(r.value.norm())),
                ("multiplicity", Value::from(r.multiplicity)),
                ("on_unit_circle", Value::Bool(r.on_unit_circle)),
                ("angle", opt_num(r.angle)),
                ("derivative_abs", num(d)),
                ("residual", num(r.residual)),
            ])
        })
        .collect();
    let degree = lift.len() - 1;
    let payload = object([
        ("degree", Value::from(degree)),
        ("shift", Value::from(shift)),
        ("circle_tolerance", num(opts.tolerance)),
        ("roots", Value::Array(items)),
    ]);
    let summary = vec![
        ("degree".into(), degree.to_string()),
        ("circle roots".into(), roots.iter().filter(|r| r.on_unit_circle).count().to_string()),
    ];
    Ok(CommandOutput { record: record("roots", &p, payload, Vec::new()), table, summary })
}

/// `measure`: `m_k(P)` by the chosen method.
pub fn cmd_measure(poly: &str, k: usize, method: Method, level: u32, opts: &Options) -> Result<CommandOutput, CliError> {
    opts.validate()?;
    if method == Method::Jensen && k != 1 {
        return Err(usage("--method jensen computes m_1 only; use --k 1"));
    }
    if method == Method::Bruteforce && level > MAX_LEVEL {
        return Err(usage(format!("--level must be at most {MAX_LEVEL}")));
    }
    let p = parse(poly)?;
    let cfg = opts.config();
    let mut warnings = Vec::new();
    let mut breakdown_rows = Vec::new();
    let (value, scaled, error, status, extra) = match method {
        Method::Jensen => {
            classify_circle_roots(&p, opts.tolerance)?;
            let v = jensen_measure(&p)?;
            (v, v.abs(), 0.0, "ok", Value::Null)
        }
        Method::Quad => {
            let r = mk_quadrature(&p, k, &cfg)?;
            warnings.extend(r.warnings.iter().cloned());
            let items: Vec<Value> = r
                .breakdown
                .iter()
                .map(|b| {
                    let (region, angle, mult) = match b.kind {
                        RegionKind::Window { angle, multiplicity } => ("window", Some(angle), Some(multiplicity)),
                        RegionKind::Complement => ("complement", None, None),
                    };
                    breakdown_rows.push(vec![
                        Cell::Text(region.into()),
                        angle.map_or(Cell::Empty, Cell::Num),
                        mult.map_or(Cell::Empty, |m| Cell::Int(m as i64)),
                        Cell::Num(b.scaled),
                        Cell::Num(b.error_estimate),
                    ]);
                    object([
                        ("region", Value::from(region)),
                        ("angle", opt_num(angle)),
                        ("multiplicity", mult.map_or(Value::Null, Value::from)),
                        ("scaled", num(b.scaled)),
                        ("error_estimate", num(b.error_estimate)),
                    ])
                })
                .collect();
            let status = match r.status {
                MeasureStatus::Ok => "ok",
                MeasureStatus::Diverging => "diverging",
            };
            (r.value, r.scaled, r.error_estimate, status, Value::Array(items))
        }
        Method::Bruteforce => {
            let r = mk_bruteforce_with(&p, k, level, opts.tolerance, cfg.execution)?;
            warnings.extend(r.warning.clone());
            let extra = object([
                ("level", Value::from(r.level)),
                ("previous_level_value", num(r.previous_value)),
                ("level_difference", num(r.level_difference())),
            ]);
            let status = if r.warning.is_some() { "warning" } else { "ok" };
            (r.value, r.scaled(), r.level_difference(), status, extra)
        }
    };
    let payload = object([
        ("k", Value::from(k)),
        ("method", Value::from(method.as_str())),
        ("value", num(value)),
        ("scaled", num(scaled)),
        ("error_estimate", num(error)),
        ("status", Value::from(status)),
        (if method == Method::Quad { "breakdown" } else { "details" }, extra),
    ]);
    let table = Table {
        header: vec!["k", "method", "mk", "scaled", "error", "status"],
        rows: vec![vec![
            Cell::Int(k as i64),
            Cell::Text(method.as_str().into()),
            Cell::Num(value),
            Cell::Num(scaled),
            Cell::Num(error),
            Cell::Text(status.into()),
        ]],
    };
    let mut summary = Vec::new();
    if !breakdown_rows.is_empty() {
        for row in breakdown_rows {
            let label = match (&row[0], &row[1]) {
                (Cell::Text(r), Cell::Num(a)) => format!("{r} t={}", sig10(*a)),
                (Cell::Text(r), _) => r.clone(),
                _ => String::new(),
            };
            if let (Cell::Num(s), Cell::Num(e)) = (&row[3], &row[4]) {
                summary.push((label, format!("{} ± {}", sig10(*s), sig10(*e))));
            }
        }
    }
    Ok(CommandOutput { record: record("measure", &p, payload, warnings), table, summary })
}

fn limit_payload(l: &LimitValue) -> Value {
    let contributions: Vec<Value> = l
        .contributions
        .iter()
        .map(|c| {
            object([
                ("angle", num(c.angle)),
                ("derivative_abs", num(c.derivative_abs)),
                ("term", num(c.term)),
            ])
        })
        .collect();
    let witness = l.divergence_witness.map_or(Value::Null, |w| {
        object([
            ("angle", num(w.angle)),
            ("re", num(w.root.re)),
            ("im", num(w.root.im)),
            ("multiplicity", Value::from(w.multiplicity)),
            ("derivative_abs", num(w.derivative_abs)),
        ])
    });
    object([
        ("finite", Value::Bool(l.finite)),
        ("value", l.value.map_or(Value::from("infinite"), num)),
        ("contributions", Value::Array(contributions)),
        ("witness", witness),
    ])
}

fn limit_text(l: &LimitValue) -> String {
    l.value.map_or("infinite".into(), sig10)
}

/// `limit`: the large-`k` limit of `|m_k|/k!`.
pub fn cmd_limit(poly: &str, opts: &Options) -> Result<CommandOutput, CliError> {
    opts.validate()?;
    let p = parse(poly)?;
    let l = limit_formula(&p, opts.tolerance)?;
    let value_cell = l.value.map_or(Cell::Text("infinite".into()), Cell::Num);
    let mut rows: Vec<Vec<Cell>> = l
        .contributions
        .iter()
        .map(|c| {
            vec![
                Cell::Text(l.finite.to_string()),
                value_cell.clone(),
                Cell::Num(c.angle),
                Cell::Num(c.derivative_abs),
                Cell::Num(c.term),
            ]
        })
        .collect();
    if let Some(w) = l.divergence_witness {
        rows.push(vec![
            Cell::Text("false".into()),
            value_cell.clone(),
            Cell::Num(w.angle),
            Cell::Num(w.derivative_abs),
            Cell::Text("infinite".into()),
        ]);
    }
    if rows.is_empty() {
        rows.push(vec![Cell::Text(l.finite.to_string()), value_cell, Cell::Empty, Cell::Empty, Cell::Empty]);
    }
    let mut summary = vec![("limit".into(), limit_text(&l))];
    if let Some(w) = l.divergence_witness {
        summary.push((
            "witness".into(),
            format!("t = {}, multiplicity {}", sig10(w.angle), w.multiplicity),
        ));
    }
    Ok(CommandOutput {
        record: record("limit", &p, limit_payload(&l), Vec::new()),
        table: Table { header: vec!["finite", "value", "angle", "derivative_abs", "term"], rows },
        summary,
    })
}

/// `converge`: `|m_k|/k!` for `k = 1..=kmax` with ratios, envelope and verdict.
pub fn cmd_converge(poly: &str, kmax: usize, opts: &Options) -> Result<CommandOutput, CliError> {
    opts.validate()?;
    if kmax < 3 {
        return Err(usage("--kmax must be at least 3"));
    }
    let p = parse(poly)?;
    let report = convergence_study(&p, kmax, &opts.config())?;
    let mut table = Table { header: vec!["k", "mk", "scaled", "ratio", "envelope", "error"], rows: Vec::new() };
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            table.rows.push(vec![
                Cell::Int(r.k as i64),
                Cell::Num(r.mk),
                Cell::Num(r.scaled),
                r.ratio.map_or(Cell::Empty, Cell::Num),
                r.envelope.map_or(Cell::Empty, Cell::Num),
                Cell::Num(r.error_estimate),
            ]);
            object([
                ("k", Value::from(r.k)),
                ("mk", num(r.mk)),
                ("scaled", num(r.scaled)),
                ("ratio", opt_num(r.ratio)),
                ("envelope", opt_num(r.envelope)),
                ("error", num(r.error_estimate)),
            ])
        })
        .collect();
    let bounds = report.bounds.map_or(Value::Null, |b| {
        object([
            ("lower", num(b.lower)),
            ("upper", num(b.upper)),
            ("complement_measure", num(b.complement_measure)),
        ])
    });
    let payload = object([
        ("k_max", Value::from(kmax)),
        ("verdict", Value::from(report.verdict.as_str())),
        ("study_tolerance", num(report.study_tolerance)),
        ("eventually_monotone", report.eventually_monotone.map_or(Value::Null, Value::Bool)),
        ("limit", limit_payload(&report.limit)),
        ("offwindow_bounds", bounds),
        ("rows", Value::Array(rows)),
    ]);
    let summary = vec![
        ("limit".into(), limit_text(&report.limit)),
        ("verdict".into(), report.verdict.as_str().into()),
    ];
    Ok(CommandOutput { record: record("converge", &p, payload, report.warnings.clone()), table, summary })
}

fn render(out: &CommandOutput, format: Format) -> String {
    match format {
        Format::Json => render_json(&out.record),
        Format::Csv => render_csv(&out.table),
        Format::Table => render_table(out),
    }
}

fn dispatch(cli: Cli) -> Result<(String, Format, Option<std::path::PathBuf>), CliError> {
    let run = |common: &Common, f: &dyn Fn(&str, &Options) -> Result<CommandOutput, CliError>| {
        let opts = Options { tolerance: common.tol, delta: common.delta };
        f(&common.poly, &opts).map(|o| (render(&o, common.format), common.format, common.out.clone()))
    };
    match &cli.command {
        Command::Roots(c) => run(c, &cmd_roots),
        Command::Limit(c) => run(c, &cmd_limit),
        Command::Measure { common, k, method, level } => {
            run(common, &|p, o| cmd_measure(p, *k, *method, *level, o))
        }
        Command::Converge { common, kmax } => run(common, &|p, o| cmd_converge(p, *kmax, o)),
    }
}

/// Run the command line; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == EXIT_OK { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(cli) {
        Ok((text, _, None)) => {
            let _ = stdout.write_all(text.as_bytes());
            EXIT_OK
        }
        Ok((text, _, Some(path))) => match std::fs::write(&path, text) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                EXIT_USAGE
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("mahlerk").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["limit", "z+"]).0, EXIT_PARSE);
        assert_eq!(run_args(&["measure", "z+1", "--k", "2", "--method", "jensen"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["converge", "z+1", "--kmax", "2"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["limit", "z - 1.0000000015"]).0, EXIT_AMBIGUOUS);
        assert_eq!(run_args(&["limit", "z - z"]).0, EXIT_NUMERIC);
        assert_eq!(run_args(&["frobnicate", "z"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn measure_jensen_json() {
        let (code, out, _) = run_args(&["measure", "z+1", "--k", "1", "--method", "jensen"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["payload"]["value"].as_f64().unwrap().abs(), 0.0);
        assert_eq!(v["input_polynomial"], "z + 1");
    }
}
