//! `foliage` command-line front end.
//!
//! Every subcommand is a [`Command`] registered by name in a [`Registry`].
//! A run produces a [`Report`]; the human-readable text and the exit code are
//! derived from it.

pub mod commands;
mod format;

use std::collections::BTreeSet;
use std::fmt;

use clap::parser::ValueSource;
use clap::{CommandFactory, FromArgMatches, Parser};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use foliage_core::error::Error;
use foliage_core::verdict::Status;

pub use commands::{Command, Registry};

pub const SCHEMA: u32 = 1;
pub const TOOL: &str = "foliage";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_FALSE: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Flags shared by all subcommands; each command declares which it accepts.
#[derive(Parser, Debug, Clone)]
#[command(
    name = "foliage",
    version,
    about = "Singular foliations on closed 4-manifolds from their algebraic invariants",
    after_help = "Commands: classes, splittings, exists, achiral, leaf, transversal, adjunct, \
                  degree, ledger, genus-bound, verify-domega, catalog.\n\
                  Exit codes: 0 EXISTS/true, 2 OBSTRUCTED/false, 3 UNKNOWN, 64 usage or input error, \
                  1 other errors."
)]
pub struct Args {
    /// Subcommand name.
    pub command: String,
    /// Manifold (catalog name, kNAME, A#B, or a JSON file), or a polynomial for `degree`.
    pub target: Option<String>,

    /// Euler class of the tangent line field, as "a1,a2,...".
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Euler class of the normal line field.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    /// Complex class c; defaults to tau + nu.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    /// Homology class of a surface.
    #[arg(long, allow_hyphen_values = true)]
    pub class: Option<String>,
    /// Genus of the surface.
    #[arg(long)]
    pub genus: Option<u32>,
    /// Coordinate bound for lattice searches.
    #[arg(long)]
    pub bound: Option<i64>,
    /// Seed for every randomized path.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Emit the JSON report instead of text.
    #[arg(long)]
    pub json: bool,

    /// Positive singularities, ';'-separated (e.g. "pencil;cusp;z1^3 - z2^2").
    #[arg(long, allow_hyphen_values = true)]
    pub sing: Option<String>,
    /// Plan strategy: default, single, or a ';'-separated menu.
    #[arg(long)]
    pub strategy: Option<String>,
    /// Positive singularities of an achiral plan.
    #[arg(long, allow_hyphen_values = true)]
    pub pos: Option<String>,
    /// Negative singularities of an achiral plan.
    #[arg(long, allow_hyphen_values = true)]
    pub neg: Option<String>,
    /// Use the achiral ledger.
    #[arg(long)]
    pub achiral: bool,

    /// Hopf degree method: exact or oracle.
    #[arg(long, default_value = "exact")]
    pub method: String,
    /// Oracle trials.
    #[arg(long, default_value_t = 7)]
    pub trials: usize,
    /// Oracle polydisc radius.
    #[arg(long, default_value_t = 0.5)]
    pub radius: f64,

    /// Asserts the manifold is a product N x S1 (unconditional genus bound).
    #[arg(long)]
    pub product: bool,

    /// Finite-difference step.
    #[arg(long)]
    pub h: Option<f64>,
    /// Number of sample points.
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    /// Residual tolerance.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    /// Difference scheme: central2 or central4.
    #[arg(long, default_value = "central2")]
    pub scheme: String,
    /// Left-hand side route: covariant or coordinate.
    #[arg(long, default_value = "covariant")]
    pub route: String,
    /// Number of step halvings for a convergence study (0 = none).
    #[arg(long, default_value_t = 0)]
    pub levels: usize,
    /// Metric field: expressions, "expr:...", or "grid:PATH".
    #[arg(long)]
    pub metric: Option<String>,
    /// Vector field x.
    #[arg(long)]
    pub x: Option<String>,
    /// Vector field z.
    #[arg(long)]
    pub z: Option<String>,
    /// Chart box "lo,hi" applied to every coordinate.
    #[arg(long, default_value = "-1,1", allow_hyphen_values = true)]
    pub domain: String,
}

/// A parsed command line together with the flags given explicitly.
#[derive(Debug, Clone)]
pub struct Invocation {
    pub args: Args,
    pub explicit: BTreeSet<String>,
}

impl Invocation {
    pub fn seed(&self) -> u64 {
        self.args.seed.unwrap_or(0)
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) if e.is_input_error() => EXIT_USAGE,
            CliError::Core(_) => EXIT_DOMAIN,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(e) if e.is_input_error() => "input",
            CliError::Core(_) => "domain",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

/// What a command produced, before it is wrapped in a [`Report`].
#[derive(Debug, Clone)]
pub struct Outcome {
    pub inputs: Value,
    pub result: Value,
    pub citations: Vec<String>,
    pub text: String,
    pub exit_code: i32,
}

pub fn status_exit(s: Status) -> i32 {
    match s {
        Status::Exists => EXIT_TRUE,
        Status::Obstructed => EXIT_FALSE,
        Status::Unknown => EXIT_UNKNOWN,
    }
}

pub fn bool_exit(b: bool) -> i32 {
    if b {
        EXIT_TRUE
    } else {
        EXIT_FALSE
    }
}

/// The JSON document behind `--json`. Contains nothing time- or host-dependent,
/// so re-running `command` with the same seed reproduces it byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    /// Arguments after the program name.
    pub command: Vec<String>,
    pub inputs: Value,
    pub result: Value,
    pub citations: Vec<String>,
    pub seed: u64,
    pub exit_code: i32,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Report, CliError> {
        let r: Report = serde_json::from_str(s).map_err(|e| CliError::Core(Error::from(e)))?;
        if r.schema != SCHEMA {
            return Err(CliError::Usage(format!(
                "unsupported report schema {}",
                r.schema
            )));
        }
        Ok(r)
    }
}

/// Result of one run: the report, text for standard output, and an error
/// message for standard error when the command failed.
#[derive(Debug, Clone)]
pub struct Run {
    pub report: Report,
    pub text: String,
    pub error: Option<String>,
    pub json: bool,
}

impl Run {
    pub fn exit_code(&self) -> i32 {
        self.report.exit_code
    }

    /// What goes to standard output.
    pub fn stdout(&self) -> String {
        if self.json {
            self.report.to_json()
        } else {
            self.text.clone()
        }
    }
}

/// Parses `argv` (without the program name).
pub fn parse(argv: &[String]) -> Result<Invocation, clap::Error> {
    let full = std::iter::once(TOOL.to_string()).chain(argv.iter().cloned());
    let cmd = Args::command();
    // `ids()` also yields the derive's argument group; keep real arguments only
    let known: BTreeSet<String> = cmd
        .get_arguments()
        .map(|a| a.get_id().to_string())
        .collect();
    let matches = cmd.try_get_matches_from(full)?;
    let args = Args::from_arg_matches(&matches)?;
    let explicit = matches
        .ids()
        .map(|id| id.as_str().to_string())
        .filter(|id| {
            known.contains(id) && matches.value_source(id) == Some(ValueSource::CommandLine)
        })
        .collect();
    Ok(Invocation { args, explicit })
}

/// Runs an already-parsed invocation.
pub fn execute(registry: &Registry, argv: &[String], inv: &Invocation) -> Run {
    let outcome = registry.dispatch(inv);
    let (inputs, result, citations, text, exit_code, error) = match outcome {
        Ok(o) => (o.inputs, o.result, o.citations, o.text, o.exit_code, None),
        Err(e) => {
            let result =
                serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            (
                Value::Null,
                result,
                Vec::new(),
                String::new(),
                e.exit_code(),
                Some(e.to_string()),
            )
        }
    };
    Run {
        report: Report {
            schema: SCHEMA,
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            command: argv.to_vec(),
            inputs,
            result,
            citations,
            seed: inv.seed(),
            exit_code,
        },
        text,
        error,
        json: inv.args.json,
    }
}

/// Parses and runs `argv` with the standard registry. Usage errors detected by
/// the argument parser are returned as `Err` with their rendered message.
pub fn run(argv: &[String]) -> Result<Run, clap::Error> {
    let inv = parse(argv)?;
    Ok(execute(&Registry::standard(), argv, &inv))
}

/// Re-runs the command recorded in a report.
pub fn replay(report: &Report) -> Result<Report, CliError> {
    let run = run(&report.command).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(run.report)
}
