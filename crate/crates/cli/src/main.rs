//! `paratab` command-line frontend.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use paratab::reasoner::{Mode, Query, Reasoner, ReasonerConfig, ReasoningResult};
use paratab::tableau::{BranchClass, Limits};
use paratab::{
    emit_trace, parse_concept, parse_ontology, parse_query, Error, Ontology, SourceDocument,
};

const EXIT_TRUE: u8 = 0;
const EXIT_FALSE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "paratab", version, about = "Paraconsistent ALC reasoner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the ontology entails an instance or subsumption query.
    Check {
        file: PathBuf,
        /// `C(ind)`, `C subsumedby D` or `consistent`.
        #[arg(long)]
        query: String,
        #[arg(long, default_value = "para")]
        mode: Mode,
        #[command(flatten)]
        common: Common,
    },
    /// Decide classical consistency of the ontology.
    Consistent {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether `--sub` is subsumed by `--sup`.
    Subsumes {
        file: PathBuf,
        #[arg(long)]
        sub: String,
        #[arg(long)]
        sup: String,
        #[arg(long, default_value = "para")]
        mode: Mode,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Write the full tableau as JSON to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, default_value_t = Limits::default().max_nodes)]
    max_nodes: usize,
    #[arg(long, default_value_t = Limits::default().max_branches)]
    max_branches: usize,
    /// Explore disjunction branches on several threads.
    #[arg(long)]
    parallel: bool,
    /// Print one summary line per branch.
    #[arg(long)]
    show_branches: bool,
    /// Expand every branch even after the verdict is known. Implied by
    /// `--trace` and `--show-branches`.
    #[arg(long)]
    exhaustive: bool,
}

impl Common {
    fn reasoner(&self) -> Reasoner {
        Reasoner::new(ReasonerConfig {
            limits: Limits {
                max_nodes: self.max_nodes,
                max_branches: self.max_branches,
            },
            parallel: self.parallel,
            exhaustive: self.exhaustive || self.trace.is_some() || self.show_branches,
            ..Default::default()
        })
    }
}

enum Failure {
    Usage(String),
    Limit(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceLimit { .. } => Failure::Limit(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<Ontology, Failure> {
    let doc = SourceDocument::from_path(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_ontology(&doc).map_err(|e| Failure::Usage(e.to_string()))
}

fn verdict_word(query: &Query, verdict: bool) -> &'static str {
    match (query, verdict) {
        (Query::Consistency, true) => "CONSISTENT",
        (Query::Consistency, false) => "INCONSISTENT",
        (Query::Instance(_), true) => "ENTAILED",
        (Query::Instance(_), false) => "NOT-ENTAILED",
        (Query::Subsumes { .. }, true) => "SUBSUMED",
        (Query::Subsumes { .. }, false) => "NOT-SUBSUMED",
    }
}

fn report(out: &mut dyn Write, r: &ReasoningResult, common: &Common) -> Result<u8, Failure> {
    let io = |e: std::io::Error| Failure::Usage(e.to_string());
    writeln!(out, "{}", verdict_word(&r.query, r.verdict)).map_err(io)?;
    if common.show_branches {
        for (i, b) in r.trace.branches.iter().enumerate() {
            let conflicts: Vec<String> = b
                .classification
                .evidence
                .iter()
                .map(|c| {
                    format!(
                        "{}@{} {}",
                        c.atom,
                        b.branch.node(c.node).name(),
                        c.class.name()
                    )
                })
                .collect();
            writeln!(
                out,
                "branch {}: {} nodes, {} [{}]",
                i + 1,
                b.branch.node_count(),
                b.classification.class.name(),
                conflicts.join(", ")
            )
            .map_err(io)?;
        }
        let open = r
            .trace
            .classes()
            .filter(|c| *c == BranchClass::Open)
            .count();
        writeln!(out, "{} branches, {} open", r.trace.branches.len(), open).map_err(io)?;
    }
    if let Some(path) = &common.trace {
        std::fs::write(path, emit_trace(r).to_json())
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(if r.verdict { EXIT_TRUE } else { EXIT_FALSE })
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<u8, Failure> {
    match cli.command {
        Command::Check {
            file,
            query,
            mode,
            common,
        } => {
            let o = load(&file)?;
            let q = parse_query(&query).map_err(|e| Failure::Usage(e.to_string()))?;
            let r = common.reasoner().answer(&o, &q, mode)?;
            report(out, &r, &common)
        }
        Command::Consistent { file, common } => {
            let o = load(&file)?;
            let r = common
                .reasoner()
                .answer(&o, &Query::Consistency, Mode::Classical)?;
            report(out, &r, &common)
        }
        Command::Subsumes {
            file,
            sub,
            sup,
            mode,
            common,
        } => {
            let o = load(&file)?;
            let parse = |s: &str| parse_concept(s).map_err(|e| Failure::Usage(e.to_string()));
            let q = Query::Subsumes {
                sub: parse(&sub)?,
                sup: parse(&sup)?,
            };
            let r = common.reasoner().answer(&o, &q, mode)?;
            report(out, &r, &common)
        }
    }
}

/// Runs the CLI on `args` (program name first), writing results to `out` and
/// diagnostics to `err`. Returns the process exit code.
fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_TRUE
            };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Limit(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_LIMIT
        }
    }
}

fn main() -> ExitCode {
    let code = run(
        std::env::args_os(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    );
    ExitCode::from(code)
}
