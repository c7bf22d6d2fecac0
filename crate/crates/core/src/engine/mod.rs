//! Guarded-rule execution engine.
//!
//! A protocol is a [`RuleSet`]: an ordered list of `(guard, action)` pairs
//! shared by every node. Each step evaluates all guards against one global
//! [`Snapshot`], lets a [`Daemon`] choose movers among the enabled nodes,
//! computes every mover's next state from that same snapshot, and only then
//! writes the results back. Within a node the first enabled rule fires.

mod alpha;
mod daemon;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, NodeId};

pub use alpha::{Alpha, AlphaError};
pub use daemon::{Daemon, DaemonFamily, DaemonPolicy, Selection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("no enabled node: the configuration is stabilized")]
    NoEnabledNode,
    #[error("trace replay mismatch at step {step}, node {node}")]
    ReplayMismatch { step: usize, node: NodeId },
}

/// Anything that says whether its node belongs to the set `S`.
pub trait Membership {
    fn is_in(&self) -> bool;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeState {
    In,
    Out,
}

impl Membership for NodeState {
    #[inline]
    fn is_in(&self) -> bool {
        matches!(self, NodeState::In)
    }
}

impl fmt::Display for NodeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeState::In => "In",
            NodeState::Out => "Out",
        })
    }
}

/// One state per node. The set `S` is always derived from the states.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration<S = NodeState> {
    states: Vec<S>,
}

impl<S> Configuration<S> {
    pub fn from_states(states: Vec<S>) -> Self {
        Configuration { states }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, v: NodeId) -> &S {
        &self.states[v]
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn set(&mut self, v: NodeId, state: S) {
        self.states[v] = state;
    }

    pub fn into_states(self) -> Vec<S> {
        self.states
    }
}

impl<S: Membership> Configuration<S> {
    pub fn contains(&self, v: NodeId) -> bool {
        self.states[v].is_in()
    }

    /// Ascending members of `S`.
    pub fn members(&self) -> Vec<NodeId> {
        (0..self.len()).filter(|&v| self.contains(v)).collect()
    }

    pub fn set_size(&self) -> usize {
        self.states.iter().filter(|s| s.is_in()).count()
    }

    pub fn membership(&self) -> Configuration<NodeState> {
        Configuration::from_states(
            self.states
                .iter()
                .map(|s| {
                    if s.is_in() {
                        NodeState::In
                    } else {
                        NodeState::Out
                    }
                })
                .collect(),
        )
    }
}

impl Configuration<NodeState> {
    pub fn all_in(n: usize) -> Self {
        Configuration::from_states(vec![NodeState::In; n])
    }

    pub fn all_out(n: usize) -> Self {
        Configuration::from_states(vec![NodeState::Out; n])
    }

    pub fn from_members(n: usize, members: &[NodeId]) -> Self {
        let mut c = Configuration::all_out(n);
        for &v in members {
            c.set(v, NodeState::In);
        }
        c
    }
}

/// How a run's starting configuration is produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialKind {
    AllOut,
    AllIn,
    /// Each node independently `In` with probability `p`.
    Bernoulli {
        p: f64,
        seed: u64,
    },
}

impl fmt::Display for InitialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialKind::AllOut => f.write_str("all-out"),
            InitialKind::AllIn => f.write_str("all-in"),
            InitialKind::Bernoulli { p, .. } => write!(f, "bernoulli:{p}"),
        }
    }
}

impl FromStr for InitialKind {
    type Err = String;

    /// Parses `all-out`, `all-in` or `bernoulli:p`; the seed is left at 0
    /// for the caller to fill in.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all-out" => Ok(InitialKind::AllOut),
            "all-in" => Ok(InitialKind::AllIn),
            _ => {
                let p = s
                    .strip_prefix("bernoulli:")
                    .and_then(|p| p.parse::<f64>().ok())
                    .ok_or_else(|| format!("unknown initial configuration {s:?}"))?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(format!("bernoulli probability {p} outside [0, 1]"));
                }
                Ok(InitialKind::Bernoulli { p, seed: 0 })
            }
        }
    }
}

pub fn initial_configuration(kind: InitialKind, n: usize) -> Configuration {
    match kind {
        InitialKind::AllOut => Configuration::all_out(n),
        InitialKind::AllIn => Configuration::all_in(n),
        InitialKind::Bernoulli { p, seed } => {
            assert!(
                (0.0..=1.0).contains(&p),
                "bernoulli probability {p} outside [0, 1]"
            );
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Configuration::from_states(
                (0..n)
                    .map(|_| {
                        if rng.gen_bool(p) {
                            NodeState::In
                        } else {
                            NodeState::Out
                        }
                    })
                    .collect(),
            )
        }
    }
}

/// Read access to membership and In-neighbor counts, the only inputs the
/// domination expressions need.
pub trait LocalView {
    fn graph(&self) -> &Graph;
    fn is_in(&self, v: NodeId) -> bool;
    /// `|N_S(v)|`.
    fn in_neighbors(&self, v: NodeId) -> usize;
}

/// Frozen pre-step view handed to guards and actions. In-neighbor counts
/// are cached so that guards run in time proportional to the degree.
#[derive(Debug, Clone, Copy)]
pub struct Snapshot<'a, S> {
    graph: &'a Graph,
    states: &'a [S],
    in_counts: &'a [usize],
    alpha: Alpha,
}

impl<'a, S> Snapshot<'a, S> {
    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn state(&self, v: NodeId) -> &'a S {
        &self.states[v]
    }

    pub fn states(&self) -> &'a [S] {
        self.states
    }
}

impl<S: Membership> LocalView for Snapshot<'_, S> {
    fn graph(&self) -> &Graph {
        self.graph
    }

    #[inline]
    fn is_in(&self, v: NodeId) -> bool {
        self.states[v].is_in()
    }

    #[inline]
    fn in_neighbors(&self, v: NodeId) -> usize {
        self.in_counts[v]
    }
}

/// Uncached view over a configuration; counts neighbors on every query.
#[derive(Debug, Clone, Copy)]
pub struct DirectView<'a, S> {
    pub graph: &'a Graph,
    pub states: &'a [S],
}

impl<'a, S> DirectView<'a, S> {
    pub fn new(graph: &'a Graph, config: &'a Configuration<S>) -> Self {
        DirectView {
            graph,
            states: config.states(),
        }
    }
}

impl<S: Membership> LocalView for DirectView<'_, S> {
    fn graph(&self) -> &Graph {
        self.graph
    }

    fn is_in(&self, v: NodeId) -> bool {
        self.states[v].is_in()
    }

    fn in_neighbors(&self, v: NodeId) -> usize {
        self.graph
            .adj(v)
            .iter()
            .filter(|&&u| self.states[u].is_in())
            .count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleLabel {
    /// Register refresh of the distance-one variant.
    R0Refresh,
    /// Join `S`.
    R1,
    /// Leave `S`.
    R2,
}

impl fmt::Display for RuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleLabel::R0Refresh => "R0",
            RuleLabel::R1 => "R1",
            RuleLabel::R2 => "R2",
        })
    }
}

pub type Guard<S> = fn(&Snapshot<'_, S>, NodeId) -> bool;
pub type Action<S> = fn(&Snapshot<'_, S>, NodeId) -> S;

pub struct Rule<S> {
    pub label: RuleLabel,
    pub guard: Guard<S>,
    pub action: Action<S>,
}

impl<S> Clone for Rule<S> {
    fn clone(&self) -> Self {
        Rule {
            label: self.label,
            guard: self.guard,
            action: self.action,
        }
    }
}

impl<S> fmt::Debug for Rule<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Rule")
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

/// Ordered rules executed by every node.
#[derive(Debug, Clone)]
pub struct RuleSet<S> {
    rules: Vec<Rule<S>>,
}

impl<S> RuleSet<S> {
    pub fn new(rules: Vec<Rule<S>>) -> Self {
        RuleSet { rules }
    }

    pub fn empty() -> Self {
        RuleSet { rules: Vec::new() }
    }

    pub fn rules(&self) -> &[Rule<S>] {
        &self.rules
    }

    pub fn first_enabled(&self, snapshot: &Snapshot<'_, S>, v: NodeId) -> Option<&Rule<S>> {
        self.rules.iter().find(|rule| (rule.guard)(snapshot, v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveRecord<S = NodeState> {
    pub step: usize,
    pub node: NodeId,
    pub rule: RuleLabel,
    pub pre: S,
    pub post: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace<S = NodeState> {
    pub initial: Configuration<S>,
    /// Moves in execution order; moves of one step share a step index.
    pub moves: Vec<MoveRecord<S>>,
    pub final_config: Configuration<S>,
    pub stabilized: bool,
    pub steps: usize,
}

impl<S: Clone + PartialEq> Trace<S> {
    pub fn total_moves(&self) -> usize {
        self.moves.len()
    }

    /// Applies every move to the initial configuration, checking each
    /// recorded pre-state along the way.
    pub fn replay(&self) -> Result<Configuration<S>, EngineError> {
        let mut config = self.initial.clone();
        for step in self.moves_by_step() {
            for record in step {
                if config.state(record.node) != &record.pre {
                    return Err(EngineError::ReplayMismatch {
                        step: record.step,
                        node: record.node,
                    });
                }
            }
            for record in step {
                config.set(record.node, record.post.clone());
            }
        }
        Ok(config)
    }

    /// Moves grouped by step, in order.
    pub fn moves_by_step(&self) -> Vec<&[MoveRecord<S>]> {
        self.moves.chunk_by(|a, b| a.step == b.step).collect()
    }

    /// Rule sequence executed by each node.
    pub fn node_sequences(&self) -> Vec<Vec<RuleLabel>> {
        let mut seqs = vec![Vec::new(); self.initial.len()];
        for record in &self.moves {
            seqs[record.node].push(record.rule);
        }
        seqs
    }
}

/// Step budget used when a caller does not supply one: `10 * n * m`.
pub fn default_max_steps(g: &Graph) -> usize {
    (10 * g.node_count() * g.edge_count()).max(1)
}

/// Mutable run state with incrementally maintained In-neighbor counts.
struct Execution<'g, 'r, S> {
    graph: &'g Graph,
    rules: &'r RuleSet<S>,
    alpha: Alpha,
    states: Vec<S>,
    in_counts: Vec<usize>,
}

impl<'g, 'r, S: Clone + Membership> Execution<'g, 'r, S> {
    fn new(
        graph: &'g Graph,
        rules: &'r RuleSet<S>,
        alpha: Alpha,
        config: &Configuration<S>,
    ) -> Self {
        let states = config.states().to_vec();
        let view = DirectView {
            graph,
            states: &states,
        };
        let in_counts = graph.nodes().map(|v| view.in_neighbors(v)).collect();
        Execution {
            graph,
            rules,
            alpha,
            states,
            in_counts,
        }
    }

    fn snapshot(&self) -> Snapshot<'_, S> {
        Snapshot {
            graph: self.graph,
            states: &self.states,
            in_counts: &self.in_counts,
            alpha: self.alpha,
        }
    }

    fn enabled(&self) -> Vec<NodeId> {
        let snap = self.snapshot();
        self.graph
            .nodes()
            .filter(|&v| self.rules.first_enabled(&snap, v).is_some())
            .collect()
    }

    /// Executes `movers` against the current snapshot, then writes all
    /// results at once.
    fn execute(&mut self, movers: &[NodeId], step: usize) -> Vec<MoveRecord<S>> {
        let snap = self.snapshot();
        let records: Vec<MoveRecord<S>> = movers
            .iter()
            .map(|&v| {
                let rule = self
                    .rules
                    .first_enabled(&snap, v)
                    .expect("daemon selected a disabled node");
                MoveRecord {
                    step,
                    node: v,
                    rule: rule.label,
                    pre: snap.state(v).clone(),
                    post: (rule.action)(&snap, v),
                }
            })
            .collect();
        for record in &records {
            let (was, is) = (record.pre.is_in(), record.post.is_in());
            if was != is {
                for &u in self.graph.adj(record.node) {
                    if is {
                        self.in_counts[u] += 1;
                    } else {
                        self.in_counts[u] -= 1;
                    }
                }
            }
            self.states[record.node] = record.post.clone();
        }
        records
    }
}

/// Nodes with at least one enabled rule, ascending, all evaluated on the
/// same configuration.
pub fn enabled_nodes<S: Clone + Membership>(
    g: &Graph,
    c: &Configuration<S>,
    rules: &RuleSet<S>,
    alpha: Alpha,
) -> Vec<NodeId> {
    Execution::new(g, rules, alpha, c).enabled()
}

/// One daemon step from `c`.
pub fn step<S: Clone + Membership>(
    g: &Graph,
    c: &Configuration<S>,
    rules: &RuleSet<S>,
    alpha: Alpha,
    daemon: &mut Daemon,
    step_index: usize,
) -> Result<(Configuration<S>, Vec<MoveRecord<S>>), EngineError> {
    let mut exec = Execution::new(g, rules, alpha, c);
    let enabled = exec.enabled();
    if enabled.is_empty() {
        return Err(EngineError::NoEnabledNode);
    }
    let movers = daemon.select(&enabled);
    let records = exec.execute(&movers, step_index);
    Ok((Configuration::from_states(exec.states), records))
}

/// Steps until no node is enabled or `max_steps` steps have run.
pub fn run_to_stabilization<S: Clone + Membership>(
    g: &Graph,
    c0: &Configuration<S>,
    rules: &RuleSet<S>,
    alpha: Alpha,
    policy: DaemonPolicy,
    max_steps: usize,
) -> Trace<S> {
    let mut daemon = Daemon::new(policy, g.node_count());
    run_with_daemon(g, c0, rules, alpha, &mut daemon, max_steps, None)
}

/// Post-selection hook: narrows the daemon's choice before execution.
/// Must return a non-empty subset of a non-empty input.
pub type SelectionFilter<'a> = &'a (dyn Fn(&Graph, &[NodeId]) -> Vec<NodeId> + Sync);

pub fn run_with_daemon<S: Clone + Membership>(
    g: &Graph,
    c0: &Configuration<S>,
    rules: &RuleSet<S>,
    alpha: Alpha,
    daemon: &mut Daemon,
    max_steps: usize,
    filter: Option<SelectionFilter<'_>>,
) -> Trace<S> {
    let mut exec = Execution::new(g, rules, alpha, c0);
    let mut moves = Vec::new();
    let mut steps = 0;
    let mut stabilized = false;
    loop {
        let enabled = exec.enabled();
        if enabled.is_empty() {
            stabilized = true;
            break;
        }
        if steps >= max_steps {
            break;
        }
        let mut movers = daemon.select(&enabled);
        if let Some(filter) = filter {
            movers = filter(g, &movers);
        }
        debug_assert!(!movers.is_empty());
        moves.extend(exec.execute(&movers, steps));
        steps += 1;
    }
    Trace {
        initial: c0.clone(),
        moves,
        final_config: Configuration::from_states(exec.states),
        stabilized,
        steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::{cycle, path};

    fn join_if_lonely() -> RuleSet<NodeState> {
        RuleSet::new(vec![Rule {
            label: RuleLabel::R1,
            guard: |s, v| !s.is_in(v) && s.in_neighbors(v) == 0,
            action: |_, _| NodeState::In,
        }])
    }

    /// Copy the state of the successor on a cycle.
    fn rotate() -> RuleSet<NodeState> {
        RuleSet::new(vec![Rule {
            label: RuleLabel::R1,
            guard: |s, v| {
                let succ = (v + 1) % s.states().len();
                s.state(v) != s.state(succ)
            },
            action: |s, v| *s.state((v + 1) % s.states().len()),
        }])
    }

    #[test]
    fn empty_rule_set_enables_nothing() {
        let g = path(3);
        let c = Configuration::all_out(3);
        assert!(enabled_nodes(&g, &c, &RuleSet::empty(), Alpha::HALF).is_empty());
    }

    #[test]
    fn synchronous_step_reads_one_snapshot() {
        let g = cycle(4);
        let c = Configuration::from_members(4, &[0]);
        let rules = rotate();
        assert_eq!(enabled_nodes(&g, &c, &rules, Alpha::HALF), [0, 3]);
        let mut d = Daemon::new(DaemonPolicy::synchronous(), 4);
        let (next, records) = step(&g, &c, &rules, Alpha::HALF, &mut d, 0).unwrap();
        // Sequential writes would leave everything Out.
        assert_eq!(next.members(), [3]);
        assert_eq!(records.len(), 2);
        assert!(records.iter().all(|r| r.step == 0));
    }

    #[test]
    fn singleton_distributed_matches_central() {
        let g = path(3);
        let c = Configuration::from_members(3, &[0]);
        let rules = join_if_lonely();
        assert_eq!(enabled_nodes(&g, &c, &rules, Alpha::HALF), [2]);
        let mut central = Daemon::new(DaemonPolicy::central(Selection::Random { seed: 0 }), 3);
        let mut dist = Daemon::new(DaemonPolicy::distributed(Selection::Random { seed: 0 }), 3);
        let (a, ra) = step(&g, &c, &rules, Alpha::HALF, &mut central, 0).unwrap();
        let (b, rb) = step(&g, &c, &rules, Alpha::HALF, &mut dist, 0).unwrap();
        assert_eq!(a, b);
        assert_eq!(ra, rb);
    }

    #[test]
    fn step_when_stable_errors() {
        let g = path(3);
        let c = Configuration::from_members(3, &[1]);
        let mut d = Daemon::new(DaemonPolicy::central(Selection::MinId), 3);
        assert_eq!(
            step(&g, &c, &join_if_lonely(), Alpha::HALF, &mut d, 0),
            Err(EngineError::NoEnabledNode)
        );
    }

    #[test]
    fn run_replays_and_stabilizes() {
        let g = cycle(6);
        let c = Configuration::all_out(6);
        let trace = run_to_stabilization(
            &g,
            &c,
            &join_if_lonely(),
            Alpha::HALF,
            DaemonPolicy::central(Selection::Random { seed: 1 }),
            100,
        );
        assert!(trace.stabilized);
        assert_eq!(trace.replay().unwrap(), trace.final_config);
        assert!(trace.moves_by_step().iter().all(|s| s.len() == 1));
        assert_eq!(trace.steps, trace.total_moves());
    }

    #[test]
    fn budget_exhaustion_is_not_an_error() {
        let g = cycle(6);
        let trace = run_to_stabilization(
            &g,
            &Configuration::all_out(6),
            &join_if_lonely(),
            Alpha::HALF,
            DaemonPolicy::central(Selection::MinId),
            1,
        );
        assert!(!trace.stabilized);
        assert_eq!(trace.total_moves(), 1);
    }

    #[test]
    fn replay_detects_tampering() {
        let g = cycle(6);
        let mut trace = run_to_stabilization(
            &g,
            &Configuration::all_out(6),
            &join_if_lonely(),
            Alpha::HALF,
            DaemonPolicy::central(Selection::MinId),
            100,
        );
        trace.moves[0].pre = NodeState::In;
        assert!(matches!(
            trace.replay(),
            Err(EngineError::ReplayMismatch { step: 0, .. })
        ));
    }

    #[test]
    fn initial_kinds() {
        assert_eq!(
            initial_configuration(InitialKind::AllIn, 4).members(),
            [0, 1, 2, 3]
        );
        assert_eq!(initial_configuration(InitialKind::AllOut, 4).set_size(), 0);
        assert_eq!(
            initial_configuration(InitialKind::Bernoulli { p: 0.0, seed: 5 }, 7),
            Configuration::all_out(7)
        );
        assert_eq!(
            initial_configuration(InitialKind::Bernoulli { p: 1.0, seed: 5 }, 7),
            Configuration::all_in(7)
        );
        let a = initial_configuration(InitialKind::Bernoulli { p: 0.5, seed: 11 }, 50);
        let b = initial_configuration(InitialKind::Bernoulli { p: 0.5, seed: 11 }, 50);
        assert_eq!(a, b);
    }

    #[test]
    fn initial_kind_parsing() {
        assert_eq!("all-out".parse(), Ok(InitialKind::AllOut));
        assert_eq!("all-in".parse(), Ok(InitialKind::AllIn));
        assert_eq!(
            "bernoulli:0.25".parse(),
            Ok(InitialKind::Bernoulli { p: 0.25, seed: 0 })
        );
        assert!("bernoulli:2".parse::<InitialKind>().is_err());
        assert!("random".parse::<InitialKind>().is_err());
    }
}
