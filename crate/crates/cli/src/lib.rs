//! Command-line front end for `matrange-core`.
//!
//! [`run`] is the whole program minus process plumbing: it takes parsed
//! arguments and a stdin reader and returns the exit code with the bytes for
//! stdout and stderr, so tests can drive it without spawning a process.

use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use matrange_core::{
    build_witness, decide_range, describe_range, io, segre_at, selftest, validate, EntireFunction,
    Error, MatrixQi,
};
use serde_json::{json, Map, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "matrange",
    version,
    about = "Exact solvability of f(X) = A over Gaussian rationals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Function spec: a JSON file path, inline JSON, or "-" for stdin.
    #[arg(long, global = true)]
    pub function: Option<String>,

    /// Matrix: a JSON file path, inline JSON, or "-" for stdin.
    #[arg(long, global = true)]
    pub matrix: Option<String>,

    /// Scalar such as "3", "1/2-3/4i" or "i".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub value: Option<String>,

    /// Matrix dimension for describe-range.
    #[arg(long, global = true)]
    pub n: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    pub output: Output,

    /// Seed for the randomized selftest suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Omitted values, totally ramified values and theorem case of f.
    Analyze,
    /// Decide whether f(X) = A is solvable.
    Decide,
    /// Decide, and construct an exact X when possible.
    Witness,
    /// Membership of a value in the spectrum of A and its Jordan structure there.
    Classify,
    /// Compute f(A) for polynomial f.
    Evaluate,
    /// Jordan structures outside the range of f in dimension n.
    DescribeRange,
    /// Run the built-in property suites.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    body: Value,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        let message = message.into();
        Failure {
            code: EXIT_USAGE,
            body: json!({"kind": "usage", "message": message}),
            message,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => EXIT_USAGE,
            Error::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_PRECONDITION,
        };
        let mut body = Map::new();
        body.insert("kind".into(), e.kind().into());
        body.insert("message".into(), e.to_string().into());
        if let Error::Parse {
            input, position, ..
        } = &e
        {
            body.insert("input".into(), input.clone().into());
            body.insert("position".into(), (*position).into());
            if let Some(token) = offending_token(input, *position) {
                body.insert("token".into(), token.into());
            }
        }
        Failure {
            code,
            body: Value::Object(body),
            message: e.to_string(),
        }
    }
}

/// The run of non-separator characters starting at `position`, if any.
fn offending_token(input: &str, position: usize) -> Option<String> {
    let rest = input.get(position..)?;
    let token: String = rest
        .chars()
        .take_while(|c| !c.is_whitespace() && !",:[]{}\"".contains(*c))
        .collect();
    (!token.is_empty()).then_some(token)
}

/// Reads an input argument: "-" means stdin, text starting with `{` or `[`
/// is inline JSON, anything else is a file path.
fn load(
    arg: &str,
    what: &str,
    stdin: &mut dyn Read,
    stdin_used: &mut bool,
) -> Result<String, Failure> {
    if arg == "-" {
        if *stdin_used {
            return Err(Failure::usage("stdin can supply only one input"));
        }
        *stdin_used = true;
        let mut buf = String::new();
        stdin
            .read_to_string(&mut buf)
            .map_err(|e| Failure::usage(format!("reading {what} from stdin: {e}")))?;
        return Ok(buf);
    }
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(Path::new(arg))
        .map_err(|e| Failure::usage(format!("reading {what} from {arg:?}: {e}")))
}

struct Inputs<'a> {
    cli: &'a Cli,
    stdin: &'a mut dyn Read,
    stdin_used: bool,
}

impl Inputs<'_> {
    fn function(&mut self) -> Result<EntireFunction, Failure> {
        let cmd = command_name(self.cli.command);
        let arg = self
            .cli
            .function
            .as_deref()
            .ok_or_else(|| Failure::usage(format!("{cmd} requires --function")))?;
        let raw = load(arg, "function", self.stdin, &mut self.stdin_used)?;
        Ok(io::parse_function(&raw)?)
    }

    fn matrix(&mut self) -> Result<MatrixQi, Failure> {
        let cmd = command_name(self.cli.command);
        let arg = self
            .cli
            .matrix
            .as_deref()
            .ok_or_else(|| Failure::usage(format!("{cmd} requires --matrix")))?;
        let raw = load(arg, "matrix", self.stdin, &mut self.stdin_used)?;
        Ok(io::parse_matrix(&raw)?)
    }
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Analyze => "analyze",
        Command::Decide => "decide",
        Command::Witness => "witness",
        Command::Classify => "classify",
        Command::Evaluate => "evaluate",
        Command::DescribeRange => "describe-range",
        Command::Selftest => "selftest",
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Error::Internal(format!("serialisation: {e}")).into())
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<(i32, Value), Failure> {
    let mut inputs = Inputs {
        cli,
        stdin,
        stdin_used: false,
    };
    let body = match cli.command {
        Command::Analyze => to_value(&validate(&inputs.function()?)?)?,
        Command::Decide => {
            let f = inputs.function()?;
            let a = inputs.matrix()?;
            to_value(&decide_range(&f, &a)?)?
        }
        Command::Witness => {
            let f = inputs.function()?;
            let a = inputs.matrix()?;
            let mut verdict = decide_range(&f, &a)?;
            let unavailable = if verdict.solvable {
                match build_witness(&f, &a, &verdict) {
                    Ok(x) => {
                        verdict.witness = Some(x);
                        None
                    }
                    Err(Error::WitnessUnavailable(reason)) => Some(reason),
                    Err(e) => return Err(e.into()),
                }
            } else {
                None
            };
            let mut body = to_value(&verdict)?;
            if let (Some(reason), Value::Object(map)) = (unavailable, &mut body) {
                map.insert("witness_unavailable".into(), json!({ "reason": reason }));
            }
            body
        }
        Command::Classify => {
            let a = inputs.matrix()?;
            let raw = cli
                .value
                .as_deref()
                .ok_or_else(|| Failure::usage("classify requires --value"))?;
            let value = io::parse_scalar(raw)?;
            let segre = segre_at(&a, &value);
            let in_e = !segre.parts.is_empty();
            let in_s = segre.parts.first().is_some_and(|&p| p >= 2);
            json!({"in_E": in_e, "in_S": in_s, "segre_partition": segre.parts})
        }
        Command::Evaluate => {
            let f = inputs.function()?;
            let a = inputs.matrix()?;
            let p = f
                .as_polynomial()
                .ok_or_else(|| Failure::usage("evaluate requires a polynomial function"))?;
            io::matrix_to_json(&matrange_core::apply_poly(p, &a))
        }
        Command::DescribeRange => {
            let f = inputs.function()?;
            let n = cli
                .n
                .ok_or_else(|| Failure::usage("describe-range requires --n"))?;
            if n == 0 {
                return Err(Failure::usage("--n must be at least 1"));
            }
            to_value(&describe_range(&f, n)?)?
        }
        Command::Selftest => {
            let report = selftest::run(cli.seed.unwrap_or(selftest::DEFAULT_SEED));
            let code = if report.all_passed() {
                EXIT_OK
            } else {
                EXIT_INTERNAL
            };
            return Ok((code, to_value(&report)?));
        }
    };
    Ok((EXIT_OK, body))
}

pub fn run(cli: &Cli, stdin: &mut dyn Read) -> Outcome {
    match execute(cli, stdin) {
        Ok((code, body)) => Outcome {
            code,
            stdout: render(&body, cli.output),
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: match cli.output {
                Output::Json => format!("{}\n", json!({ "error": f.body })),
                Output::Text => format!("error: {}\n", f.message),
            },
        },
    }
}

/// Parses `args` (including the program name) and runs; argument errors
/// exit with the usage code, `--help` and `--version` with success.
pub fn run_args<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, stdin),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: format!(
                        "{}\n",
                        json!({"error": {"kind": "usage", "message": text.trim_end()}})
                    ),
                }
            }
        }
    }
}

pub fn render(body: &Value, output: Output) -> String {
    match output {
        Output::Json => format!("{body}\n"),
        Output::Text => {
            let mut out = String::new();
            render_text(body, 0, &mut out);
            out
        }
    }
}

fn is_leaf(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn leaf(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(leaf).collect();
            format!("[{}]", inner.join(", "))
        }
        other => other.to_string(),
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if is_leaf(x) {
                    let _ = writeln!(out, "{pad}{k}: {}", leaf(x));
                } else {
                    let _ = writeln!(out, "{pad}{k}:");
                    render_text(x, indent + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                let _ = writeln!(out, "{pad}-");
                render_text(x, indent + 1, out);
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", leaf(other));
        }
    }
}
