//! Command-line surface: `series`, `ideal-dump`, `verify` and `table`.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 usage or parse error,
//! 3 Gröbner limit exceeded, 4 integrity error.

use std::ffi::OsString;
use std::io::Write;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog::{compute, ideal_for, CatalogEntry, ComputeConfig, VarietySpec};
use crate::error::Error;
use crate::groebner::Limits;
use crate::hilbert::HilbertSeries;
use crate::verify::{run_verify, CheckStatus, VerifyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Markdown,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "symtensor",
    version,
    about = "Graded algebras of symmetric tensors on smooth projective varieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone)]
struct RunArgs {
    /// Highest degree D of the reported coefficients c_0..c_D.
    #[arg(long, default_value_t = 8)]
    max_degree: usize,
    /// Wall-clock limit for each Gröbner computation, in seconds.
    #[arg(long, default_value_t = 300.0, value_parser = positive_seconds)]
    timeout: f64,
    /// Largest S-pair degree Buchberger may reach.
    #[arg(long, default_value_t = 12)]
    gb_max_degree: u32,
    /// Output format (text for series and verify, markdown for table when omitted).
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Allow Gröbner-routed parameters above the default caps.
    #[arg(long)]
    force: bool,
}

fn positive_seconds(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number of seconds, got {s:?}")),
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Graded dimensions, rational form and Krull dimension of one variety.
    Series {
        spec: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print the ideal presentation of a Gröbner-routed variety.
    IdealDump { spec: String },
    /// Run the verification suite.
    Verify {
        #[command(flatten)]
        run: RunArgs,
    },
    /// One row of dimensions per variety.
    Table {
        #[arg(required = true)]
        specs: Vec<String>,
        #[command(flatten)]
        run: RunArgs,
    },
}

impl RunArgs {
    fn config(&self) -> ComputeConfig {
        ComputeConfig {
            max_degree: self.max_degree,
            limits: Limits {
                max_degree: Some(self.gb_max_degree),
                timeout: Some(Duration::from_secs_f64(self.timeout)),
            },
            force: self.force,
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::InvalidParameter(_)
        | Error::NoIdealPresentation(_)
        | Error::NotHomogeneous(_) => 2,
        Error::LimitExceeded(_) => 3,
        _ => 4,
    }
}

/// JSON shape of one computed entry.
#[derive(Debug, Serialize)]
pub struct SeriesRecord<'a> {
    pub spec: String,
    pub coefficients: &'a [u128],
    pub rational_form: Option<&'a HilbertSeries>,
    pub krull_dim: Option<usize>,
    pub provenance: &'a str,
    pub flags: &'a [String],
}

impl<'a> From<&'a CatalogEntry> for SeriesRecord<'a> {
    fn from(e: &'a CatalogEntry) -> Self {
        SeriesRecord {
            spec: e.spec.to_string(),
            coefficients: &e.dims.0,
            rational_form: e.rational_form.as_ref(),
            krull_dim: e.krull_dim,
            provenance: &e.provenance,
            flags: &e.flags,
        }
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let result = match cli.command {
        Command::Series { spec, run } => cmd_series(&spec, &run, out),
        Command::IdealDump { spec } => cmd_ideal_dump(&spec, out),
        Command::Verify { run } => return cmd_verify(&run, out),
        Command::Table { specs, run } => cmd_table(&specs, &run, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Integrity(format!("write failed: {e}"))
}

fn cmd_series(spec: &str, run: &RunArgs, out: &mut dyn Write) -> Result<(), Error> {
    let spec = VarietySpec::parse(spec)?;
    let entry = compute(&spec, &run.config())?;
    match run.format.unwrap_or(Format::Text) {
        Format::Json => {
            let json = serde_json::to_string_pretty(&SeriesRecord::from(&entry)).expect("serializable");
            writeln!(out, "{json}").map_err(io)
        }
        Format::Text => write!(out, "{}", render_text(&entry)).map_err(io),
        f => write!(out, "{}", render_table(&[entry], run.max_degree, f)).map_err(io),
    }
}

fn cmd_ideal_dump(spec: &str, out: &mut dyn Write) -> Result<(), Error> {
    let spec = VarietySpec::parse(spec)?;
    let ideal = ideal_for(&spec)?;
    write!(out, "{}", ideal.dump()).map_err(io)
}

fn cmd_table(specs: &[String], run: &RunArgs, out: &mut dyn Write) -> Result<(), Error> {
    let parsed = specs
        .iter()
        .map(|s| VarietySpec::parse(s))
        .collect::<Result<Vec<_>, _>>()?;
    let config = run.config();
    let results: Vec<Result<CatalogEntry, Error>> = std::thread::scope(|scope| {
        let handles: Vec<_> = parsed
            .iter()
            .map(|s| scope.spawn(|| compute(s, &config)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let entries = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let format = run.format.unwrap_or(Format::Markdown);
    if format == Format::Json {
        let records: Vec<SeriesRecord> = entries.iter().map(SeriesRecord::from).collect();
        let json = serde_json::to_string_pretty(&records).expect("serializable");
        return writeln!(out, "{json}").map_err(io);
    }
    write!(out, "{}", render_table(&entries, run.max_degree, format)).map_err(io)
}

fn cmd_verify(run: &RunArgs, out: &mut dyn Write) -> i32 {
    let report = run_verify(&run.config());
    let code = report.exit_code();
    let text = render_verify(&report, run.format.unwrap_or(Format::Text), code);
    let _ = write!(out, "{text}");
    code
}

fn render_text(e: &CatalogEntry) -> String {
    let coeffs: Vec<String> = e.dims.0.iter().map(u128::to_string).collect();
    let rational = e
        .rational_form
        .as_ref()
        .map_or("unavailable".to_string(), |s| s.to_string());
    let krull = e.krull_dim.map_or("unknown".to_string(), |k| k.to_string());
    let flags = if e.flags.is_empty() { "-".to_string() } else { e.flags.join(", ") };
    format!(
        "spec: {}\ncoefficients: {}\nrational form: {rational}\nkrull_dim: {krull}\nprovenance: {}\nflags: {flags}\n",
        e.spec,
        coeffs.join(", "),
        e.provenance
    )
}

fn table_header(max_degree: usize) -> Vec<String> {
    let mut h = vec!["spec".to_string()];
    h.extend((0..=max_degree).map(|k| format!("c{k}")));
    h.push("krull".to_string());
    h.push("provenance".to_string());
    h
}

fn table_row(e: &CatalogEntry) -> Vec<String> {
    let mut row = vec![e.spec.to_string()];
    row.extend(e.dims.0.iter().map(u128::to_string));
    row.push(e.krull_dim.map_or("?".to_string(), |k| k.to_string()));
    row.push(e.provenance.clone());
    row
}

fn render_rows(header: &[String], rows: &[Vec<String>], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(header).expect("in-memory write");
            for r in rows {
                w.write_record(r).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Markdown => {
            let line = |cells: &[String]| {
                let escaped: Vec<String> = cells.iter().map(|c| c.replace('|', "\\|")).collect();
                format!("| {} |\n", escaped.join(" | "))
            };
            let mut s = line(header);
            s.push_str(&format!("|{}\n", "---|".repeat(header.len())));
            for r in rows {
                s.push_str(&line(r));
            }
            s
        }
        _ => {
            // the last column is free text and is not padded
            let n = header.len();
            let mut widths = vec![0; n];
            for r in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let mut s = String::new();
            for r in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
                let cells: Vec<String> = r
                    .iter()
                    .enumerate()
                    .map(|(k, c)| if k + 1 == n { c.clone() } else { format!("{c:<w$}", w = widths[k]) })
                    .collect();
                s.push_str(cells.join("  ").trim_end());
                s.push('\n');
            }
            s
        }
    }
}

fn render_table(entries: &[CatalogEntry], max_degree: usize, format: Format) -> String {
    let rows: Vec<Vec<String>> = entries.iter().map(table_row).collect();
    render_rows(&table_header(max_degree), &rows, format)
}

fn render_verify(report: &VerifyReport, format: Format, code: i32) -> String {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                checks: &'a [crate::verify::CheckResult],
                exit_code: i32,
            }
            let json = serde_json::to_string_pretty(&Out { checks: &report.checks, exit_code: code })
                .expect("serializable");
            format!("{json}\n")
        }
        Format::Text => {
            let mut s = String::new();
            for c in &report.checks {
                s.push_str(&format!(
                    "[{}] {} {}{} ({:.2} s)\n",
                    c.status.label(),
                    c.id,
                    c.name,
                    if c.stretch && c.status == CheckStatus::SkippedByLimit {
                        " [skipped-by-limit, not a failure]"
                    } else if c.status == CheckStatus::SkippedByLimit {
                        " [skipped-by-limit]"
                    } else {
                        ""
                    },
                    c.seconds
                ));
                for d in &c.details {
                    s.push_str(&format!("    {d}\n"));
                }
            }
            let count = |st| report.checks.iter().filter(|c| c.status == st).count();
            s.push_str(&format!(
                "summary: {} checks, {} passed, {} failed, {} skipped-by-limit; exit {code}\n",
                report.checks.len(),
                count(CheckStatus::Pass),
                count(CheckStatus::Fail),
                count(CheckStatus::SkippedByLimit)
            ));
            s
        }
        f => {
            let header: Vec<String> = ["id", "check", "status", "stretch", "seconds", "details"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            let rows: Vec<Vec<String>> = report
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.id.clone(),
                        c.name.clone(),
                        c.status.label().to_string(),
                        c.stretch.to_string(),
                        format!("{:.2}", c.seconds),
                        c.details.join("; "),
                    ]
                })
                .collect();
            render_rows(&header, &rows, f)
        }
    }
}
