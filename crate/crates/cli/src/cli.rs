//! Argument parsing and command dispatch.

use std::io::{self, IsTerminal, Write};

use clap::{Parser, ValueEnum};
use rayon::prelude::*;

use fano_qc_core::{FanoParams, Pipeline};

use crate::emit::{self, Format, Target};
use crate::json::VerifyJson;
use crate::verify::{run_checks, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Print the structure constants and invariants.
    Compute,
    /// Print one intermediate of the pipeline.
    Emit,
    /// Run every consistency check for one (N, k).
    Verify,
    /// Run `verify` for every 1 <= k < N <= n-max.
    Batch,
}

#[derive(Debug, Parser)]
#[command(
    name = "fano-qc",
    version,
    about = "Exact quantum cohomology of Fano hypersurfaces M_N^k"
)]
pub struct Args {
    pub command: Command,
    /// Dimension of the ambient CP^{N-1} plus one.
    #[arg(value_name = "N")]
    pub n: Option<i64>,
    /// Degree of the hypersurface.
    #[arg(value_name = "k")]
    pub k: Option<i64>,
    #[arg(long, value_enum, default_value = "gw")]
    pub emit_target: Target,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// Allow N = 3, 4.
    #[arg(long)]
    pub allow_small: bool,
    /// Upper bound on N for `batch`.
    #[arg(long, value_name = "X")]
    pub n_max: Option<usize>,
}

/// ANSI colour on stdout unless `FANO_QC_COLOR=0` or stdout is not a terminal.
pub fn color_enabled() -> bool {
    std::env::var("FANO_QC_COLOR").map_or(true, |v| v != "0") && io::stdout().is_terminal()
}

fn params(args: &Args) -> Result<FanoParams, String> {
    let (Some(n), Some(k)) = (args.n, args.k) else {
        return Err("N and k are required".into());
    };
    if args.allow_small {
        return FanoParams::new_relaxed(n, k).map_err(|e| e.to_string());
    }
    FanoParams::new(n, k).map_err(|e| match FanoParams::new_relaxed(n, k) {
        Ok(_) => format!("{e}; pass --allow-small for N = 3, 4"),
        Err(_) => e.to_string(),
    })
}

fn render_report(report: &Report, color: bool) -> String {
    let paint = |ok: bool, s: &str| match (color, ok) {
        (false, _) => s.to_string(),
        (true, true) => format!("\x1b[32m{s}\x1b[0m"),
        (true, false) => format!("\x1b[31m{s}\x1b[0m"),
    };
    let mut out = format!("{}\n", report.params);
    for c in &report.checks {
        let tag = match (c.passed, c.informational) {
            (true, _) => paint(true, "PASS"),
            (false, false) => paint(false, "FAIL"),
            (false, true) => "INFO".to_string(),
        };
        out.push_str(&format!("  {tag}  {}", c.name));
        if !c.detail.is_empty() {
            out.push_str(&format!("  ({})", c.detail.replace('\n', "; ")));
        }
        out.push('\n');
    }
    out
}

/// JSON is one object for `verify` and an array for `batch`.
fn report_output(reports: &[Report], format: Format, color: bool, batch: bool) -> String {
    match format {
        Format::Json => {
            let docs: Vec<VerifyJson> = reports.iter().map(Report::to_json).collect();
            let s = if batch {
                serde_json::to_string_pretty(&docs)
            } else {
                serde_json::to_string_pretty(&docs[0])
            };
            s.expect("plain data serializes") + "\n"
        }
        _ => reports.iter().map(|r| render_report(r, color)).collect(),
    }
}

/// Runs the parsed command, writing results to `out` and diagnostics to `err`.
pub fn execute(args: &Args, color: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let usage = |err: &mut dyn Write, msg: &str| {
        let _ = writeln!(err, "error: {msg}");
        EXIT_USAGE
    };
    match args.command {
        Command::Batch => {
            let Some(n_max) = args.n_max else {
                return usage(err, "batch requires --n-max");
            };
            if args.n.is_some() || args.k.is_some() {
                return usage(err, "batch takes no N or k");
            }
            let n_min = if args.allow_small { 3 } else { 5 };
            if n_max < n_min {
                return usage(err, &format!("--n-max must be at least {n_min}"));
            }
            let jobs = FanoParams::sweep(n_min, n_max);
            let reports: Vec<Report> = jobs.par_iter().map(|&p| run_checks(p)).collect();
            let _ = out.write_all(report_output(&reports, args.format, color, true).as_bytes());
            if reports.iter().all(Report::passed) {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Command::Verify => {
            let p = match params(args) {
                Ok(p) => p,
                Err(msg) => return usage(err, &msg),
            };
            let report = run_checks(p);
            let _ = out.write_all(
                report_output(std::slice::from_ref(&report), args.format, color, false).as_bytes(),
            );
            if report.passed() {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Command::Compute | Command::Emit => {
            let p = match params(args) {
                Ok(p) => p,
                Err(msg) => return usage(err, &msg),
            };
            let target = if args.command == Command::Compute {
                Target::Gw
            } else {
                args.emit_target
            };
            match Pipeline::run(p) {
                Ok(pipeline) => {
                    let _ = out.write_all(emit::render(&pipeline, target, args.format).as_bytes());
                    EXIT_OK
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {p}: {e}");
                    EXIT_FAILED
                }
            }
        }
    }
}

/// Parses `argv` and runs it against the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let stderr = io::stderr();
    execute(
        &args,
        color_enabled(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}
