//! Command-line front end: `gen-graph`, `simulate`, `sweep` and `verify`.
//!
//! Exit codes: 0 success, 1 run did not stabilize, 2 usage or input error,
//! 3 I/O error.

pub mod experiment;
pub mod svg;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::engine::{Alpha, InitialKind, NodeState, Trace};
use crate::graph::{gen_random_connected, Graph, GraphError, NodeId};
use crate::oracle::{self, NodeSet, OracleError};

pub use experiment::{
    run_single, sweep, DaemonChoice, ExperimentError, ExperimentSpec, GraphSource, GroupMean,
    ResultRow, SweepResult, CSV_HEADER,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_STABILIZED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("run did not stabilize within the step budget")]
    NotStabilized,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
            CliError::NotStabilized => EXIT_NOT_STABILIZED,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Io(source) => CliError::Io {
                path: PathBuf::from("<output>"),
                source,
            },
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// `N,DENSITY[,DENSITY...]`
#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub n: usize,
    pub densities: Vec<f64>,
}

impl FromStr for GenParams {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split(',');
        let n = parts
            .next()
            .and_then(|t| t.trim().parse().ok())
            .ok_or_else(|| format!("expected N,DENSITY, got {s:?}"))?;
        let densities = parts
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad density {t:?}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if densities.is_empty() {
            return Err(format!("expected N,DENSITY, got {s:?}"));
        }
        Ok(GenParams { n, densities })
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "alphadom",
    version,
    about = "Self-stabilizing minimal alpha-dominating set simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random connected graph in edge-list format.
    GenGraph(GenGraphArgs),
    /// Run the protocol once and print a CSV row.
    Simulate(SimulateArgs),
    /// Run a parameter sweep and write per-run and mean CSV rows.
    Sweep(SweepArgs),
    /// Check a candidate set against the brute-force oracle.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct GenGraphArgs {
    #[arg(long, value_name = "N,DENSITY")]
    pub gen: GenParams,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Edge-list file.
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    pub graph: Option<PathBuf>,
    /// Generate graphs instead: node count and one or more densities.
    #[arg(long, value_name = "N,DENSITY")]
    pub gen: Option<GenParams>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, default_value = "central:random")]
    pub daemon: DaemonChoice,
    #[arg(long, default_value = "all-out")]
    pub init: InitialKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record wall time in the `wall_ms` column.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Threshold as a fraction `p/q`.
    #[arg(long)]
    pub alpha: Alpha,
    #[command(flatten)]
    pub run: RunArgs,
    /// Dump every move as CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Comma-separated thresholds; defaults to 1/10 through 9/10.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<Alpha>,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[command(flatten)]
    pub run: RunArgs,
    /// Also write an SVG line chart of the mean rows.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Comma-separated member ids; may be empty.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub set: String,
    #[arg(long)]
    pub alpha: Alpha,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            if !matches!(e, CliError::NotStabilized) {
                let _ = writeln!(stderr, "error: {e}");
            }
            e.exit_code()
        }
    }
}

pub fn execute(command: Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::GenGraph(args) => cmd_gen_graph(&args, stdout),
        Command::Simulate(args) => cmd_simulate(&args, stdout),
        Command::Sweep(args) => cmd_sweep(&args, stdout),
        Command::Verify(args) => cmd_verify(&args, stdout),
    }
}

fn emit(out: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(io_err(path)),
        None => stdout
            .write_all(bytes)
            .map_err(io_err(Path::new("<stdout>"))),
    }
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    Graph::parse_edge_list(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn cmd_gen_graph(args: &GenGraphArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let [density] = args.gen.densities[..] else {
        return Err(CliError::Usage("gen-graph takes a single density".into()));
    };
    let g = gen_random_connected(args.gen.n, density, args.seed)?;
    emit(args.out.as_deref(), g.to_edge_list().as_bytes(), stdout)
}

pub fn cmd_simulate(args: &SimulateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let g = match (&args.graph.graph, &args.graph.gen) {
        (Some(path), _) => load_graph(path)?,
        (None, Some(gen)) => {
            let [density] = gen.densities[..] else {
                return Err(CliError::Usage("simulate takes a single density".into()));
            };
            gen_random_connected(gen.n, density, args.run.seed)?
        }
        (None, None) => return Err(CliError::Usage("need --graph or --gen".into())),
    };
    let run = &args.run;
    let (row, trace) = run_single(
        &g,
        args.alpha,
        run.daemon,
        run.init,
        run.seed,
        run.max_steps,
        run.timing,
    )?;
    if let Some(path) = &args.trace {
        fs::write(path, trace_csv(&trace)).map_err(io_err(path))?;
    }
    let mut csv = Vec::new();
    experiment::write_rows(std::slice::from_ref(&row), &mut csv)?;
    emit(run.out.as_deref(), &csv, stdout)?;
    if row.stabilized {
        Ok(())
    } else {
        Err(CliError::NotStabilized)
    }
}

/// `step,node,rule,pre,post` per move.
pub fn trace_csv(trace: &Trace<NodeState>) -> String {
    let mut out = String::from("step,node,rule,pre,post\n");
    for m in &trace.moves {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            m.step, m.node, m.rule, m.pre, m.post
        ));
    }
    out
}

pub fn sweep_spec(args: &SweepArgs) -> Result<ExperimentSpec, CliError> {
    let graph = match (&args.graph.graph, &args.graph.gen) {
        (Some(path), _) => GraphSource::Fixed(load_graph(path)?),
        (None, Some(gen)) => GraphSource::Generated {
            n: gen.n,
            densities: gen.densities.clone(),
        },
        (None, None) => return Err(CliError::Usage("need --graph or --gen".into())),
    };
    let alphas = if args.alpha.is_empty() {
        Alpha::grid(10)
    } else {
        args.alpha.clone()
    };
    Ok(ExperimentSpec {
        graph,
        alphas,
        daemon: args.run.daemon,
        init: args.run.init,
        reps: args.reps,
        seed: args.run.seed,
        max_steps: args.run.max_steps,
        timing: args.run.timing,
        out: args.run.out.clone(),
    })
}

pub fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let spec = sweep_spec(args)?;
    let result = sweep(&spec)?;
    let mut csv = Vec::new();
    result.write_csv(&mut csv)?;
    emit(spec.out.as_deref(), &csv, stdout)?;
    if let Some(path) = &args.svg {
        fs::write(path, svg::render(&result)).map_err(io_err(path))?;
    }
    if result.rows().all(|r| r.stabilized) {
        Ok(())
    } else {
        Err(CliError::NotStabilized)
    }
}

fn parse_members(text: &str, n: usize) -> Result<Vec<NodeId>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let v: NodeId = t
                .parse()
                .map_err(|_| CliError::Usage(format!("bad node id {t:?}")))?;
            if v >= n {
                return Err(CliError::Usage(format!(
                    "node {v} out of range for {n} nodes"
                )));
            }
            Ok(v)
        })
        .collect()
}

/// Oracle verdicts for one candidate set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub alpha_dominating: bool,
    pub minimal: Result<bool, OracleError>,
    pub minimum: Result<usize, OracleError>,
}

impl VerifyReport {
    pub fn new(g: &Graph, s: &NodeSet, alpha: Alpha) -> Self {
        VerifyReport {
            alpha_dominating: oracle::is_alpha_dominating(g, s, alpha),
            minimal: oracle::is_minimal_alpha_dominating(g, s, alpha),
            minimum: oracle::minimum_cardinality(g, alpha),
        }
    }
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        write!(
            f,
            "alpha-dominating: {}; minimal: ",
            yes_no(self.alpha_dominating)
        )?;
        match &self.minimal {
            Ok(b) => f.write_str(yes_no(*b))?,
            Err(_) => f.write_str("unknown (budget exceeded)")?,
        }
        f.write_str("; minimum: ")?;
        match &self.minimum {
            Ok(k) => write!(f, "{k}"),
            Err(_) => f.write_str("unknown (budget exceeded)"),
        }
    }
}

pub fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let g = load_graph(&args.graph)?;
    let members = parse_members(&args.set, g.node_count())?;
    let s = NodeSet::from_members(g.node_count(), &members);
    let report = VerifyReport::new(&g, &s, args.alpha);
    writeln!(stdout, "{report}").map_err(io_err(Path::new("<stdout>")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::path;

    #[test]
    fn gen_params() {
        assert_eq!(
            "200,0.05,0.9".parse(),
            Ok(GenParams {
                n: 200,
                densities: vec![0.05, 0.9]
            })
        );
        assert!("200".parse::<GenParams>().is_err());
        assert!("x,0.5".parse::<GenParams>().is_err());
    }

    #[test]
    fn verify_reports() {
        let p3 = path(3);
        let report = |m: &[NodeId]| {
            VerifyReport::new(&p3, &NodeSet::from_members(3, m), Alpha::HALF).to_string()
        };
        assert_eq!(
            report(&[1]),
            "alpha-dominating: yes; minimal: yes; minimum: 1"
        );
        assert!(report(&[0, 1]).contains("minimal: no"));
        assert!(report(&[]).starts_with("alpha-dominating: no"));
    }

    #[test]
    fn member_parsing() {
        assert_eq!(parse_members("", 3).unwrap(), Vec::<NodeId>::new());
        assert_eq!(parse_members("0, 2", 3).unwrap(), [0, 2]);
        assert!(parse_members("3", 3).is_err());
        assert!(parse_members("a", 3).is_err());
    }

    #[test]
    fn decimal_alpha_is_a_usage_error() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            ["alphadom", "simulate", "--gen", "10,0.5", "--alpha", "0.5"],
            &mut out,
            &mut err,
        );
        assert_eq!(code, EXIT_USAGE);
        assert!(String::from_utf8(err).unwrap().contains("1/2"));
    }
}
