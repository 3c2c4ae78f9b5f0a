//! `cubeplex` command line: every run prints one JSON verdict on stdout and
//! exits 0 (ok), 1 (negative verdict) or 2 (bad input).

mod commands;
pub mod suite;

use std::ffi::OsString;
use std::fmt::Debug;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

pub use commands::{ComplexCmd, CoxeterCmd, PocsetCmd, TreeCmd};

#[derive(Parser, Debug)]
#[command(name = "cubeplex", version, about = "Exact checks for CAT(0) cube complexes, pocsets, Coxeter groups and tree space")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub group: Group,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Global {
    /// Size cap for enumerations (vertices, ball elements, cubes)
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Seed for all sampling
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Indented output
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Write a Graphviz rendering to PATH
    #[arg(long, global = true, value_name = "PATH")]
    pub dot: Option<PathBuf>,
    /// Write the produced object (complex, system, tree) as JSON to PATH
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Group {
    /// Cube complexes: validation, links, CAT(0), hyperplanes
    Complex {
        #[command(subcommand)]
        cmd: ComplexCmd,
    },
    /// Halfspace systems and their dual cube complexes
    Pocset {
        #[command(subcommand)]
        cmd: PocsetCmd,
    },
    /// Coxeter groups: words, balls, walls, cubulation, ends
    Coxeter {
        #[command(subcommand)]
        cmd: CoxeterCmd,
    },
    /// Phylogenetic tree space
    Tree {
        #[command(subcommand)]
        cmd: TreeCmd,
    },
    /// Run the property suites and report one verdict per check
    Suite(suite::SuiteArgs),
}

/// Exit status and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Bad input: unreadable files, malformed JSON, invalid objects where a valid
/// one is required.
#[derive(Debug)]
pub struct InputError {
    pub kind: String,
    pub message: String,
}

impl InputError {
    pub fn new(kind: &str, message: impl Into<String>) -> Self {
        InputError {
            kind: kind.into(),
            message: message.into(),
        }
    }
}

impl<E: std::error::Error + Debug> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError {
            kind: error_kind(&e),
            message: e.to_string(),
        }
    }
}

/// Variant name of an error enum, from its `Debug` form.
pub fn error_kind(e: &impl Debug) -> String {
    let s = format!("{e:?}");
    let end = s.find(['(', ' ', '{']).unwrap_or(s.len());
    s[..end].to_string()
}

pub(crate) type Res<T> = Result<T, InputError>;

#[derive(Debug, Serialize)]
pub struct Verdict {
    pub ok: bool,
    pub command: String,
    pub certificate: Value,
    pub stats: Value,
    pub result: Value,
}

impl Verdict {
    pub fn new(command: &str, ok: bool) -> Self {
        Verdict {
            ok,
            command: command.into(),
            certificate: Value::Null,
            stats: json!({}),
            result: Value::Null,
        }
    }

    pub fn certificate(mut self, c: Value) -> Self {
        self.certificate = c;
        self
    }

    pub fn stats(mut self, s: Value) -> Self {
        self.stats = s;
        self
    }

    pub fn result(mut self, r: Value) -> Self {
        self.result = r;
        self
    }

    /// Negative verdict from a library error, which becomes the certificate.
    pub fn rejected(command: &str, e: &(impl std::error::Error + Debug)) -> Self {
        Verdict::new(command, false).certificate(json!({ "error": error_kind(e), "message": e.to_string() }))
    }
}

pub(crate) struct Ctx {
    pub global: Global,
}

impl Ctx {
    pub fn cap(&self, default: usize) -> usize {
        self.global.cap.unwrap_or(default)
    }

    pub fn write_dot(&self, text: impl FnOnce() -> String) -> Res<()> {
        if let Some(p) = &self.global.dot {
            write_file(p, &text())?;
        }
        Ok(())
    }

    pub fn write_out(&self, text: impl FnOnce() -> String) -> Res<()> {
        if let Some(p) = &self.global.out {
            write_file(p, &text())?;
        }
        Ok(())
    }
}

pub(crate) fn write_file(path: &Path, text: &str) -> Res<()> {
    std::fs::write(path, text).map_err(|e| InputError::new("Io", format!("{}: {e}", path.display())))
}

pub(crate) fn read_file(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| InputError::new("Io", format!("{}: {e}", path.display())))
}

pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Res<T> {
    let text = read_file(path)?;
    serde_json::from_str(&text).map_err(|e| InputError::new("Json", format!("{}: {e}", path.display())))
}

fn render(value: &impl Serialize, pretty: bool) -> String {
    let mut s = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("verdicts serialize");
    s.push('\n');
    s
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let pretty = cli.global.pretty;
    let ctx = Ctx { global: cli.global };
    let result = match cli.group {
        Group::Complex { cmd } => commands::complex(&ctx, cmd),
        Group::Pocset { cmd } => commands::pocset(&ctx, cmd),
        Group::Coxeter { cmd } => commands::coxeter(&ctx, cmd),
        Group::Tree { cmd } => commands::tree(&ctx, cmd),
        Group::Suite(args) => suite::run_suite(&ctx, &args),
    };
    match result {
        Ok(v) => {
            debug_assert!(v.ok || !v.certificate.is_null(), "negative verdicts carry a certificate");
            Outcome {
                code: if v.ok { 0 } else { 1 },
                stdout: render(&v, pretty),
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            code: 2,
            stdout: render(&json!({ "ok": false, "error": { "kind": e.kind, "message": e.message } }), pretty),
            stderr: format!("error: {}\n", e.message),
        },
    }
}
