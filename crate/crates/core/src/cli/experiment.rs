//! Experiment specs, single runs, sweeps and their CSV rendering.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::alpha_mds;
use crate::engine::{
    self, initial_configuration, Alpha, Configuration, DaemonPolicy, InitialKind, NodeState,
    Selection, Trace,
};
use crate::graph::{gen_random_connected, Graph, GraphError};
use crate::oracle::{self, NodeSet};
use crate::transformer;

pub const CSV_HEADER: [&str; 12] = [
    "n",
    "m",
    "density",
    "alpha",
    "seed",
    "init",
    "daemon",
    "moves",
    "stabilized",
    "set_size",
    "set_ratio",
    "wall_ms",
];

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("stabilized set fails the oracle on n={n}, alpha={alpha}, seed={seed}")]
    OracleMismatch { n: usize, alpha: Alpha, seed: u64 },
    #[error("experiment has no {0}")]
    Empty(&'static str),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Scheduler choices exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DaemonChoice {
    CentralRandom,
    CentralMinId,
    CentralMaxId,
    CentralStale,
    /// Synchronous daemon on the distance-two protocol.
    Sync,
    /// Random distributed daemon on the distance-two protocol.
    DistRandom,
    /// Distance-one variant under a random distributed daemon.
    Transformed,
    /// Distance-one variant under the synchronous daemon.
    TransformedSync,
}

impl DaemonChoice {
    pub const ALL: [DaemonChoice; 8] = [
        DaemonChoice::CentralRandom,
        DaemonChoice::CentralMinId,
        DaemonChoice::CentralMaxId,
        DaemonChoice::CentralStale,
        DaemonChoice::Sync,
        DaemonChoice::DistRandom,
        DaemonChoice::Transformed,
        DaemonChoice::TransformedSync,
    ];

    pub fn policy(self, seed: u64) -> DaemonPolicy {
        let random = Selection::Random { seed };
        match self {
            DaemonChoice::CentralRandom => DaemonPolicy::central(random),
            DaemonChoice::CentralMinId => DaemonPolicy::central(Selection::MinId),
            DaemonChoice::CentralMaxId => DaemonPolicy::central(Selection::MaxId),
            DaemonChoice::CentralStale => DaemonPolicy::central(Selection::AdversarialStale),
            DaemonChoice::Sync | DaemonChoice::TransformedSync => DaemonPolicy::synchronous(),
            DaemonChoice::DistRandom | DaemonChoice::Transformed => {
                DaemonPolicy::distributed(random)
            }
        }
    }

    pub fn is_transformed(self) -> bool {
        matches!(
            self,
            DaemonChoice::Transformed | DaemonChoice::TransformedSync
        )
    }

    pub fn is_central(self) -> bool {
        matches!(
            self,
            DaemonChoice::CentralRandom
                | DaemonChoice::CentralMinId
                | DaemonChoice::CentralMaxId
                | DaemonChoice::CentralStale
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            DaemonChoice::CentralRandom => "central:random",
            DaemonChoice::CentralMinId => "central:minid",
            DaemonChoice::CentralMaxId => "central:maxid",
            DaemonChoice::CentralStale => "central:stale",
            DaemonChoice::Sync => "sync",
            DaemonChoice::DistRandom => "dist:random",
            DaemonChoice::Transformed => "transformed",
            DaemonChoice::TransformedSync => "transformed:sync",
        }
    }
}

impl fmt::Display for DaemonChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DaemonChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DaemonChoice::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = DaemonChoice::ALL.iter().map(|d| d.name()).collect();
                format!("unknown daemon {s:?}; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    /// One fixed graph for every run.
    Fixed(Graph),
    /// A fresh random graph per repetition and density.
    Generated { n: usize, densities: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub graph: GraphSource,
    pub alphas: Vec<Alpha>,
    pub daemon: DaemonChoice,
    pub init: InitialKind,
    pub reps: usize,
    pub seed: u64,
    /// `None` uses the engine default of `10 n m`.
    pub max_steps: Option<usize>,
    /// Measure wall time; off keeps the output byte-reproducible.
    pub timing: bool,
    pub out: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn new(graph: GraphSource, alphas: Vec<Alpha>) -> Self {
        ExperimentSpec {
            graph,
            alphas,
            daemon: DaemonChoice::CentralRandom,
            init: InitialKind::AllOut,
            reps: 5,
            seed: 0,
            max_steps: None,
            timing: false,
            out: None,
        }
    }
}

/// Outcome of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub n: usize,
    pub m: usize,
    pub density: f64,
    pub alpha: Alpha,
    pub seed: u64,
    pub init: InitialKind,
    pub daemon: DaemonChoice,
    pub moves: usize,
    pub stabilized: bool,
    pub set_size: usize,
    pub wall_ms: Option<f64>,
}

impl ResultRow {
    pub fn set_ratio(&self) -> f64 {
        self.set_size as f64 / self.n as f64
    }

    pub fn record(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.m.to_string(),
            format!("{:.4}", self.density),
            self.alpha.to_string(),
            self.seed.to_string(),
            self.init.to_string(),
            self.daemon.to_string(),
            self.moves.to_string(),
            self.stabilized.to_string(),
            self.set_size.to_string(),
            format!("{:.4}", self.set_ratio()),
            fmt_wall(self.wall_ms),
        ]
    }
}

fn fmt_wall(ms: Option<f64>) -> String {
    ms.map(|ms| format!("{ms:.3}")).unwrap_or_default()
}

/// Per-(density, α) averages over the repetitions of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupMean {
    pub n: f64,
    pub m: f64,
    pub density: f64,
    pub alpha: Alpha,
    pub init: InitialKind,
    pub daemon: DaemonChoice,
    pub moves: f64,
    pub max_moves: usize,
    pub all_stabilized: bool,
    pub set_size: f64,
    pub set_ratio: f64,
    pub wall_ms: Option<f64>,
}

impl GroupMean {
    pub fn of(rows: &[ResultRow]) -> Self {
        let k = rows.len() as f64;
        let mean = |f: &dyn Fn(&ResultRow) -> f64| rows.iter().map(f).sum::<f64>() / k;
        GroupMean {
            n: mean(&|r| r.n as f64),
            m: mean(&|r| r.m as f64),
            density: mean(&|r| r.density),
            alpha: rows[0].alpha,
            init: rows[0].init,
            daemon: rows[0].daemon,
            moves: mean(&|r| r.moves as f64),
            max_moves: rows.iter().map(|r| r.moves).max().unwrap_or(0),
            all_stabilized: rows.iter().all(|r| r.stabilized),
            set_size: mean(&|r| r.set_size as f64),
            set_ratio: mean(&|r| r.set_ratio()),
            wall_ms: rows
                .iter()
                .map(|r| r.wall_ms)
                .sum::<Option<f64>>()
                .map(|total| total / k),
        }
    }

    pub fn record(&self) -> Vec<String> {
        vec![
            format!("{:.1}", self.n),
            format!("{:.1}", self.m),
            format!("{:.4}", self.density),
            self.alpha.to_string(),
            "mean".to_string(),
            self.init.to_string(),
            self.daemon.to_string(),
            format!("{:.2}", self.moves),
            self.all_stabilized.to_string(),
            format!("{:.2}", self.set_size),
            format!("{:.4}", self.set_ratio),
            fmt_wall(self.wall_ms),
        ]
    }
}

/// Result of a sweep, in spec order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub groups: Vec<SweepGroup>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGroup {
    /// Requested density, or the fixed graph's density.
    pub density: f64,
    pub alpha: Alpha,
    pub rows: Vec<ResultRow>,
    pub mean: GroupMean,
}

impl SweepResult {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), ExperimentError> {
        let mut w = csv_writer(out);
        w.write_record(CSV_HEADER)?;
        for group in &self.groups {
            for row in &group.rows {
                w.write_record(row.record())?;
            }
            w.write_record(group.mean.record())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn rows(&self) -> impl Iterator<Item = &ResultRow> {
        self.groups.iter().flat_map(|g| g.rows.iter())
    }

    pub fn group(&self, density: f64, alpha: Alpha) -> Option<&SweepGroup> {
        self.groups
            .iter()
            .find(|g| g.alpha == alpha && (g.density - density).abs() < 1e-12)
    }
}

pub fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

pub fn write_rows<W: Write>(rows: &[ResultRow], out: W) -> Result<(), ExperimentError> {
    let mut w = csv_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

/// Initial configuration for a run, with Bernoulli draws keyed to the run seed.
fn initial_for(kind: InitialKind, n: usize, seed: u64) -> Configuration {
    let kind = match kind {
        InitialKind::Bernoulli { p, .. } => InitialKind::Bernoulli { p, seed },
        other => other,
    };
    initial_configuration(kind, n)
}

/// One simulation; returns the row and the membership trace.
pub fn run_single(
    g: &Graph,
    alpha: Alpha,
    daemon: DaemonChoice,
    init: InitialKind,
    seed: u64,
    max_steps: Option<usize>,
    timing: bool,
) -> Result<(ResultRow, Trace<NodeState>), ExperimentError> {
    let c0 = initial_for(init, g.node_count(), seed);
    let budget = max_steps.unwrap_or_else(|| engine::default_max_steps(g));
    let policy = daemon.policy(seed);
    let started = Instant::now();
    let trace = if daemon.is_transformed() {
        let tc0 = transformer::with_random_registers(g, &c0, seed);
        let t = transformer::run_transformed(g, &tc0, alpha, policy, budget)
            .expect("transformed choices map to distributed policies");
        transformer::membership_trace(&t)
    } else {
        engine::run_to_stabilization(g, &c0, &alpha_mds::ruleset(), alpha, policy, budget)
    };
    let wall_ms = timing.then(|| started.elapsed().as_secs_f64() * 1e3);

    let final_set = NodeSet::of_configuration(&trace.final_config);
    if trace.stabilized && g.node_count() <= oracle::EXHAUSTIVE_LIMIT {
        let ok = oracle::is_minimal_alpha_dominating(g, &final_set, alpha).unwrap_or(false);
        if !ok {
            return Err(ExperimentError::OracleMismatch {
                n: g.node_count(),
                alpha,
                seed,
            });
        }
    }

    let row = ResultRow {
        n: g.node_count(),
        m: g.edge_count(),
        density: g.density(),
        alpha,
        seed,
        init,
        daemon,
        moves: trace.total_moves(),
        stabilized: trace.stabilized,
        set_size: final_set.len(),
        wall_ms,
    };
    Ok((row, trace))
}

/// Cross product of densities × α × repetitions, run on the rayon pool and
/// gathered back in spec order.
pub fn sweep(spec: &ExperimentSpec) -> Result<SweepResult, ExperimentError> {
    if spec.alphas.is_empty() {
        return Err(ExperimentError::Empty("alpha values"));
    }
    if spec.reps == 0 {
        return Err(ExperimentError::Empty("repetitions"));
    }

    // One graph per (density, rep); shared by every α.
    let graphs: Vec<(f64, Vec<Graph>)> = match &spec.graph {
        GraphSource::Fixed(g) => vec![(g.density(), vec![g.clone(); spec.reps])],
        GraphSource::Generated { n, densities } => {
            if densities.is_empty() {
                return Err(ExperimentError::Empty("densities"));
            }
            densities
                .iter()
                .map(|&d| {
                    let gs = (0..spec.reps)
                        .into_par_iter()
                        .map(|rep| gen_random_connected(*n, d, run_seed(spec.seed, rep)))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok((d, gs))
                })
                .collect::<Result<_, GraphError>>()?
        }
    };

    let jobs: Vec<(usize, Alpha, usize)> = (0..graphs.len())
        .flat_map(|gi| {
            spec.alphas
                .iter()
                .flat_map(move |&a| (0..spec.reps).map(move |rep| (gi, a, rep)))
        })
        .collect();

    let rows: Vec<ResultRow> = jobs
        .par_iter()
        .map(|&(gi, alpha, rep)| {
            let g = &graphs[gi].1[rep];
            let seed = run_seed(spec.seed, rep);
            run_single(
                g,
                alpha,
                spec.daemon,
                spec.init,
                seed,
                spec.max_steps,
                spec.timing,
            )
            .map(|(row, _)| row)
        })
        .collect::<Result<_, _>>()?;

    let groups = rows
        .chunks(spec.reps)
        .zip(jobs.chunks(spec.reps))
        .map(|(rows, jobs)| SweepGroup {
            density: graphs[jobs[0].0].0,
            alpha: jobs[0].1,
            rows: rows.to_vec(),
            mean: GroupMean::of(rows),
        })
        .collect();
    Ok(SweepResult { groups })
}

fn run_seed(base: u64, rep: usize) -> u64 {
    base.wrapping_add(rep as u64)
}
