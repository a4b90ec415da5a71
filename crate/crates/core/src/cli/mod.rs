//! Command-line front end.

mod commands;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::Error;

#[derive(Parser, Debug)]
#[command(name = "abmod", version, about = "Exact computations with (a,b)-modules, frescos and themes")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// b-adic working precision N.
    #[arg(long, global = true, default_value_t = 16, value_parser = clap::value_parser!(u64).range(4..))]
    pub prec: u64,
    /// Maximal log degree for expansions.
    #[arg(long = "log-prec", global = true)]
    pub log_prec: Option<usize>,
    /// Shift window (number of s-powers kept) for expansions; defaults to the precision.
    #[arg(long = "shift-prec", global = true)]
    pub shift_prec: Option<usize>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

impl Options {
    pub fn precision(&self) -> usize {
        self.prec as usize
    }

    pub fn shift_precision(&self) -> usize {
        self.shift_prec.unwrap_or(self.prec as usize)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bernstein polynomial, Bernstein element and geometricity.
    Bernstein {
        files: Vec<PathBuf>,
        /// Presentation or element text instead of a file.
        #[arg(long)]
        pi: Option<String>,
    },
    /// Saturation by b^{-1}a.
    Saturate { files: Vec<PathBuf> },
    /// Principal Jordan–Hölder sequence of a fresco.
    Jh { files: Vec<PathBuf> },
    /// Theme generated by an expansion.
    ThemeOf { files: Vec<PathBuf> },
    /// Canonical form of a primitive theme.
    CanonicalForm { files: Vec<PathBuf> },
    /// Dimension of Hom between two modules.
    HomDim { source: PathBuf, target: PathBuf },
    /// Change of variable a ↦ θ(a), b ↦ b θ'(a).
    ChangeVar {
        files: Vec<PathBuf>,
        /// Series in z, e.g. "z + z^2".
        #[arg(long)]
        theta: String,
    },
    /// Log, co-semisimple and primitive filtrations of a realized theme.
    Filtrations {
        files: Vec<PathBuf>,
        /// Classes for the primitive filtration, e.g. "1/2,1/3".
        #[arg(long = "lambda-set")]
        lambda_set: Option<String>,
    },
    /// Runs every applicable cross-check.
    Check { files: Vec<PathBuf> },
}

/// Result of one job: a JSON value and its text rendering.
pub struct Outcome {
    pub json: Value,
    pub text: String,
    /// A consistency check failed.
    pub failed: bool,
}

pub(crate) type JobResult = std::result::Result<Outcome, Error>;

fn exit_code(err: &Error) -> i32 {
    if err.is_input_error() {
        2
    } else {
        1
    }
}

fn render(label: &str, r: &JobResult, as_json: bool) -> (String, i32) {
    match r {
        Ok(o) => {
            let code = if o.failed { 1 } else { 0 };
            if as_json {
                (json!({"input": label, "ok": !o.failed, "result": o.json}).to_string(), code)
            } else {
                (format!("== {label}\n{}", o.text.trim_end()), code)
            }
        }
        Err(e) => {
            if as_json {
                (json!({"input": label, "ok": false, "error": {"code": e.code(), "message": e.to_string()}}).to_string(), exit_code(e))
            } else {
                (format!("== {label}\nerror [{}]: {e}", e.code()), exit_code(e))
            }
        }
    }
}

/// Runs the CLI on `argv` (including the program name); returns the exit
/// code and the report.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    let opts = cli.opts.clone();
    let jobs: Vec<(String, Box<dyn Fn() -> JobResult + Send + Sync>)> = commands::jobs(cli.command, &opts);
    if jobs.is_empty() {
        return (2, "no input given".into());
    }
    // indexed collect keeps input order
    let results: Vec<(String, JobResult)> = jobs.par_iter().map(|(label, f)| (label.clone(), f())).collect();
    let mut code = 0;
    let mut lines = Vec::new();
    for (label, r) in &results {
        let (line, c) = render(label, r, opts.json);
        // input errors dominate mathematical ones
        code = match (code, c) {
            (2, _) | (_, 2) => 2,
            (a, b) => a.max(b),
        };
        lines.push(line);
    }
    let header = if opts.json { None } else { Some(format!("precision N = {}", opts.precision())) };
    let body = header.into_iter().chain(lines).collect::<Vec<_>>().join("\n");
    (code, body)
}
