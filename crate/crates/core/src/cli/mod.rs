//! Command-line front end: loads description files, runs one command and
//! reports the answer with its witnesses.
//!
//! Exit codes: 0 the answer is yes (or the construction succeeded), 1 the
//! answer is no, 2 bad input, 3 size guard exceeded, 4 internal
//! inconsistency.

mod commands;
pub mod emit;
pub mod parse;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::guard::SizeGuard;
use emit::Definitions;
use parse::Workspace;

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_GUARD: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Subobject,
    Quotient,
    Both,
}

#[derive(Debug, Parser)]
#[command(name = "hullcalc", version, about = "Injective hulls of finite monoid actions")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Largest number of candidates a single enumeration may visit.
    #[arg(long, default_value_t = SizeGuard::DEFAULT_FRONTIER, global = true)]
    pub max_frontier: usize,
    /// Print nothing; the exit code carries the answer.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Description file to load (repeatable, `-` for standard input).
    /// Standard input is read when no file is given.
    #[arg(short = 'f', long = "file", global = true)]
    pub files: Vec<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Load and validate every entity, then echo them.
    Validate,
    /// The subobject classifier of a monoid.
    Omega { monoid: String },
    /// All equivariant maps A -> B.
    Hom { a: String, b: String },
    /// The exponential B^A with its evaluation map.
    Exp { a: String, b: String },
    /// The product A x B with its projections.
    Product { a: String, b: String },
    /// The quotients of A up to isomorphism.
    Quotients { a: String },
    /// The sub-M-sets of A with their characteristic maps.
    Subobjects { a: String },
    /// Whether a monic map is an essential extension.
    Essential { map: String },
    /// Whether A is injective.
    Injective { a: String },
    /// The injective hull of A.
    Hull {
        a: String,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Whether A and B are isomorphic.
    Iso { a: String, b: String },
    /// Inverts monics f: A -> B and g: B -> A.
    Sb { f: String, g: String },
    /// Inverts an endomorphism.
    Invert { f: String },
}

impl Command {
    fn describe(&self) -> (&'static str, Value) {
        match self {
            Command::Validate => ("validate", json!({})),
            Command::Omega { monoid } => ("omega", json!({ "monoid": monoid })),
            Command::Hom { a, b } => ("hom", json!({ "a": a, "b": b })),
            Command::Exp { a, b } => ("exp", json!({ "a": a, "b": b })),
            Command::Product { a, b } => ("product", json!({ "a": a, "b": b })),
            Command::Quotients { a } => ("quotients", json!({ "a": a })),
            Command::Subobjects { a } => ("subobjects", json!({ "a": a })),
            Command::Essential { map } => ("essential", json!({ "map": map })),
            Command::Injective { a } => ("injective", json!({ "a": a })),
            Command::Hull { a, method } => (
                "hull",
                json!({ "a": a, "method": method.to_possible_value().expect("no skipped variants").get_name() }),
            ),
            Command::Iso { a, b } => ("iso", json!({ "a": a, "b": b })),
            Command::Sb { f, g } => ("sb", json!({ "f": f, "g": g })),
            Command::Invert { f } => ("invert", json!({ "f": f })),
        }
    }
}

/// Why a command produced no report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Input(String),
    Guard(usize),
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Guard(_) => EXIT_GUARD,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Input(m) => f.write_str(m),
            Failure::Guard(limit) => write!(f, "size guard exceeded: more than {limit} candidates"),
            Failure::Internal(m) => write!(f, "internal inconsistency: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeGuardExceeded { limit } => Failure::Guard(limit),
            Error::InternalInconsistency(m) => Failure::Internal(m),
            other => Failure::Input(other.to_string()),
        }
    }
}

/// The outcome of one command.
#[derive(Debug, Clone, Default)]
pub struct Report {
    /// Exit 0 when true, 1 when false.
    pub holds: bool,
    /// Human-readable lines, printed as comments in text mode.
    pub notes: Vec<String>,
    pub result: Map<String, Value>,
    pub witnesses: Map<String, Value>,
    pub defs: Definitions,
}

/// Runs one command against an already loaded workspace.
pub fn execute(ws: &Workspace, command: &Command, guard: SizeGuard) -> Result<Report, Failure> {
    commands::Ctx { ws, guard }.run(command)
}

fn load(cli: &Cli, stdin: &mut dyn Read) -> Result<(Workspace, Vec<String>), Failure> {
    let mut ws = Workspace::new();
    let mut names = Vec::new();
    let mut sources: Vec<PathBuf> = cli.files.clone();
    if sources.is_empty() {
        sources.push(PathBuf::from("-"));
    }
    for path in sources {
        let (name, text) = if path.as_os_str() == "-" {
            let mut text = String::new();
            stdin
                .read_to_string(&mut text)
                .map_err(|e| Failure::Input(format!("cannot read standard input: {e}")))?;
            ("-".to_string(), text)
        } else {
            let name = path.display().to_string();
            let text = std::fs::read_to_string(&path).map_err(|e| Failure::Input(format!("cannot read {name}: {e}")))?;
            (name, text)
        };
        ws.load(&name, &text).map_err(|e| Failure::Input(e.to_string()))?;
        names.push(name);
    }
    Ok((ws, names))
}

fn render(cli: &Cli, files: &[String], report: &Report) -> String {
    let (name, args) = cli.command.describe();
    match cli.format {
        Format::Json => {
            let mut result = report.result.clone();
            result.insert("holds".into(), Value::Bool(report.holds));
            result.insert("definitions".into(), Value::String(report.defs.to_text()));
            result.insert("entities".into(), report.defs.to_json());
            let doc = json!({
                "command": name,
                "inputs": { "files": files, "args": args },
                "result": result,
                "witnesses": report.witnesses,
            });
            let mut out = serde_json::to_string_pretty(&doc).expect("serialisable");
            out.push('\n');
            out
        }
        Format::Text => {
            let mut out = String::new();
            let mut words = vec![name.to_string()];
            if let Some(args) = args.as_object() {
                for (key, value) in args {
                    let value = value.as_str().unwrap_or_default();
                    if key == "method" {
                        words.push(format!("--method {value}"));
                    } else {
                        words.push(value.to_string());
                    }
                }
            }
            out.push_str(&format!("# {}\n", words.join(" ")));
            out.push_str(&format!("# answer: {}\n", if report.holds { "yes" } else { "no" }));
            for note in &report.notes {
                out.push_str("# ");
                out.push_str(note);
                out.push('\n');
            }
            if !report.defs.is_empty() {
                out.push('\n');
                out.push_str(&report.defs.to_text());
            }
            out
        }
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// the report. Returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_TRUE };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let outcome = load(&cli, stdin).and_then(|(ws, files)| {
        let report = execute(&ws, &cli.command, SizeGuard::new(cli.max_frontier))?;
        Ok((files, report))
    });
    match outcome {
        Ok((files, report)) => {
            if !cli.quiet {
                let _ = stdout.write_all(render(&cli, &files, &report).as_bytes());
            }
            if report.holds {
                EXIT_TRUE
            } else {
                EXIT_FALSE
            }
        }
        Err(failure) => {
            let _ = writeln!(stderr, "error: {failure}");
            failure.exit_code()
        }
    }
}
