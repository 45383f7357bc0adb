//! The `sepgraph` command line: argument parsing, input loading and exit codes.
//!
//! Exit status is [`EXIT_OK`] for a definite answer (including negative
//! verdicts such as `NOT EQUAL`), [`EXIT_INPUT`] for unusable input and
//! [`EXIT_UNKNOWN`] when a search ran out of budget.

mod commands;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::fixtures::{fixture, plan_fixture};
use crate::graph::{parse_graph, GraphError, SeparatedGraph};
use crate::lattice::LatticeError;
use crate::monoid::{Budget, MonoidError};
use crate::resolution::ResolutionError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_UNKNOWN: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error("unknown fixture `{0}` (see `sepgraph fixtures`)")]
    UnknownFixture(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Dot,
    /// One `key=value` per line, groups separated by blank lines.
    Records,
}

#[derive(Debug, Parser)]
#[command(
    name = "sepgraph",
    version,
    about = "Symbolic computation for finitely separated graphs"
)]
pub struct Cli {
    /// Graph file, or `fixture:NAME` for a bundled graph.
    #[arg(short, long, global = true, value_name = "PATH")]
    pub graph: Option<String>,
    #[arg(short, long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a graph and print it in canonical form.
    Check,
    /// Normal form of an algebra element.
    Normalize {
        #[arg(short = 'e', long = "expr")]
        expr: String,
    },
    /// Product of two algebra elements, in normal form.
    Mul {
        #[arg(short = 'a')]
        a: String,
        #[arg(short = 'b')]
        b: String,
    },
    /// Reduced basis words up to a length.
    Basis {
        #[arg(long = "max-len")]
        max_len: usize,
    },
    /// Decide equality of two graph-monoid elements.
    MonoEq {
        #[arg(short = 'a')]
        a: String,
        #[arg(short = 'b')]
        b: String,
        /// Frontier size limit (states per search).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        budget: Option<u64>,
    },
    /// Check that every two blocks at a vertex have a common one-step image.
    StarCheck,
    /// Refine `a1 + a2 = b1 + b2` into a 2x2 matrix.
    Refine {
        #[arg(long)]
        a1: String,
        #[arg(long)]
        a2: String,
        #[arg(long)]
        b1: String,
        #[arg(long)]
        b2: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        budget: Option<u64>,
    },
    /// Enumerate admissible pairs (dot: Hasse diagram).
    Lattice,
    /// Decide simplicity of the graph monoid.
    Simple,
    /// Decide C-cofinality, printing a witness multipath to the given depth.
    Cofinal {
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Finite complete subobject generated by vertices and edges.
    Subobject {
        /// Comma or space separated vertex and edge names.
        #[arg(long)]
        items: String,
    },
    /// Build the stages of a resolution plan.
    Resolve {
        /// Plan file, or `fixture:NAME` for a bundled plan.
        plan: String,
        /// Build this many stages instead of the plan's count.
        #[arg(long)]
        stages: Option<usize>,
        #[arg(long, value_enum, default_value_t = Emit::Summary)]
        emit: Emit,
        /// Check (*) for every triple in the stage it produced.
        #[arg(long)]
        check_star: bool,
    },
    /// Check that a generator map respects every defining relation.
    VerifyHom { file: PathBuf },
    /// Compare leftmost and random rewriting on random elements.
    Confluence {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long = "max-len", default_value_t = 6)]
        max_len: usize,
    },
    /// Search for a rewrite of a vertex into an element divisible by `m`.
    Divisible {
        plan: String,
        #[arg(long)]
        stage: usize,
        #[arg(long)]
        vertex: String,
        #[arg(short = 'm', long = "by", value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
    },
    /// List the bundled graphs and plans.
    Fixtures,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Summary,
    Graph,
    Names,
}

/// What a command printed and how it ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

pub(crate) enum Verdict {
    Definite,
    Unknown,
}

/// Runs one invocation without touching the process streams.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match commands::dispatch(&cli) {
        Ok((stdout, verdict)) => Outcome {
            code: match verdict {
                Verdict::Definite => EXIT_OK,
                Verdict::Unknown => EXIT_UNKNOWN,
            },
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Entry point for the binary.
pub fn main() -> ExitCode {
    use std::io::Write;
    let out = run(std::env::args_os());
    // a closed pipe is not worth a panic
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Loads `fixture:NAME` or a graph file, resolving relative paths against `dir`.
pub fn load_graph(source: &str, dir: Option<&Path>) -> Result<SeparatedGraph, CliError> {
    if let Some(name) = source.strip_prefix("fixture:") {
        return fixture(name).ok_or_else(|| CliError::UnknownFixture(name.to_string()));
    }
    let path = match dir {
        Some(d) => d.join(source),
        None => PathBuf::from(source),
    };
    Ok(parse_graph(&read(&path)?)?)
}

/// Plan text and the directory its relative paths refer to.
fn load_plan_text(source: &str) -> Result<(String, Option<PathBuf>), CliError> {
    if let Some(name) = source.strip_prefix("fixture:") {
        let text = plan_fixture(name).ok_or_else(|| CliError::UnknownFixture(name.to_string()))?;
        return Ok((text.to_string(), None));
    }
    let path = PathBuf::from(source);
    let dir = path.parent().map(Path::to_path_buf);
    Ok((read(&path)?, dir))
}

fn budget_with(states: Option<u64>) -> Budget {
    let mut b = Budget::from_env();
    if let Some(n) = states {
        b.max_states = n as usize;
    }
    b
}
