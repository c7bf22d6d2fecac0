//! Distance-one variant of the protocol for distributed daemons.
//!
//! Every node publishes its own `exp1`/`exp2` in registers. A stale node
//! first refreshes its registers (R0). R1 and R2 fire only on fresh
//! self-registers, compute the node's own `exp1` from its neighbors' states,
//! and read neighbors' `exp2` from their published registers, so no guard
//! looks further than one hop. Among the nodes a daemon selects, a node
//! moves only if its id is larger than the id of every selected neighbor,
//! so adjacent nodes never move in the same step.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::alpha_mds::ExpressionView;
use crate::engine::{
    self, Alpha, Configuration, Daemon, DaemonFamily, DaemonPolicy, DirectView, LocalView,
    Membership, MoveRecord, NodeState, Rule, RuleLabel, RuleSet, Snapshot, Trace,
};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformerError {
    #[error("the distance-one variant needs a distributed or synchronous daemon, got {0}")]
    CentralPolicy(DaemonPolicy),
}

/// Protocol state plus the two published registers. The node id is its
/// index in the configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransformedNodeState {
    pub state: NodeState,
    pub published_exp1: Ratio<i64>,
    pub published_exp2: Ratio<i64>,
}

impl Membership for TransformedNodeState {
    #[inline]
    fn is_in(&self) -> bool {
        self.state.is_in()
    }
}

/// Views that expose published registers as well as membership.
pub trait RegisterView: LocalView {
    fn registers(&self, v: NodeId) -> &TransformedNodeState;
}

impl RegisterView for Snapshot<'_, TransformedNodeState> {
    fn registers(&self, v: NodeId) -> &TransformedNodeState {
        self.state(v)
    }
}

impl RegisterView for DirectView<'_, TransformedNodeState> {
    fn registers(&self, v: NodeId) -> &TransformedNodeState {
        &self.states[v]
    }
}

fn is_stale(view: &impl RegisterView, v: NodeId) -> bool {
    let fresh = ExpressionView::of(view, v);
    let regs = view.registers(v);
    regs.published_exp1 != fresh.exp1() || regs.published_exp2 != fresh.exp2()
}

fn t_r1_guard(view: &impl RegisterView, alpha: Alpha, v: NodeId) -> bool {
    !view.is_in(v) && !is_stale(view, v) && !ExpressionView::of(view, v).exp1_meets(alpha)
}

fn t_r2_guard(view: &impl RegisterView, alpha: Alpha, v: NodeId) -> bool {
    view.is_in(v)
        && !is_stale(view, v)
        && ExpressionView::of(view, v).exp1_meets(alpha)
        && view
            .graph()
            .adj(v)
            .iter()
            .filter(|&&w| !view.is_in(w))
            .all(|&w| alpha.is_met_by_ratio(&view.registers(w).published_exp2))
}

fn refreshed(view: &impl RegisterView, v: NodeId) -> TransformedNodeState {
    let fresh = ExpressionView::of(view, v);
    TransformedNodeState {
        state: view.registers(v).state,
        published_exp1: fresh.exp1(),
        published_exp2: fresh.exp2(),
    }
}

fn with_state(view: &impl RegisterView, v: NodeId, state: NodeState) -> TransformedNodeState {
    TransformedNodeState {
        state,
        ..view.registers(v).clone()
    }
}

/// R0: the registers of `v` disagree with its current neighborhood.
pub fn refresh_enabled(g: &Graph, tc: &Configuration<TransformedNodeState>, v: NodeId) -> bool {
    is_stale(&DirectView::new(g, tc), v)
}

pub fn t_r1_enabled(
    g: &Graph,
    tc: &Configuration<TransformedNodeState>,
    alpha: Alpha,
    v: NodeId,
) -> bool {
    t_r1_guard(&DirectView::new(g, tc), alpha, v)
}

pub fn t_r2_enabled(
    g: &Graph,
    tc: &Configuration<TransformedNodeState>,
    alpha: Alpha,
    v: NodeId,
) -> bool {
    t_r2_guard(&DirectView::new(g, tc), alpha, v)
}

/// `[R0: refresh, R1: join, R2: leave]`.
pub fn ruleset() -> RuleSet<TransformedNodeState> {
    RuleSet::new(vec![
        Rule {
            label: RuleLabel::R0Refresh,
            guard: |s, v| is_stale(s, v),
            action: |s, v| refreshed(s, v),
        },
        Rule {
            label: RuleLabel::R1,
            guard: |s, v| t_r1_guard(s, s.alpha(), v),
            action: |s, v| with_state(s, v, NodeState::In),
        },
        Rule {
            label: RuleLabel::R2,
            guard: |s, v| t_r2_guard(s, s.alpha(), v),
            action: |s, v| with_state(s, v, NodeState::Out),
        },
    ])
}

/// Keeps `v` iff its id beats every neighbor that is also in `enabled`.
/// The result is an independent set of `g`.
pub fn priority_filter(g: &Graph, enabled: &[NodeId]) -> Vec<NodeId> {
    let mut marked = vec![false; g.node_count()];
    for &v in enabled {
        marked[v] = true;
    }
    enabled
        .iter()
        .copied()
        .filter(|&v| g.adj(v).iter().all(|&u| !marked[u] || u < v))
        .collect()
}

/// Configuration whose registers agree with `c`.
pub fn with_fresh_registers(g: &Graph, c: &Configuration) -> Configuration<TransformedNodeState> {
    let view = DirectView::new(g, c);
    Configuration::from_states(
        g.nodes()
            .map(|v| {
                let e = ExpressionView::of(&view, v);
                TransformedNodeState {
                    state: *c.state(v),
                    published_exp1: e.exp1(),
                    published_exp2: e.exp2(),
                }
            })
            .collect(),
    )
}

/// Configuration with arbitrary, typically stale, register contents: each
/// node claims a random In-neighbor count in `0..=deg`.
pub fn with_random_registers(
    g: &Graph,
    c: &Configuration,
    seed: u64,
) -> Configuration<TransformedNodeState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Configuration::from_states(
        g.nodes()
            .map(|v| {
                let deg = g.deg(v) as i64;
                let k = rng.gen_range(0..=deg);
                TransformedNodeState {
                    state: *c.state(v),
                    published_exp1: Ratio::new(k, deg),
                    published_exp2: Ratio::new(k - 1, deg),
                }
            })
            .collect(),
    )
}

/// Runs the distance-one variant under a distributed or synchronous daemon.
pub fn run_transformed(
    g: &Graph,
    tc0: &Configuration<TransformedNodeState>,
    alpha: Alpha,
    policy: DaemonPolicy,
    max_steps: usize,
) -> Result<Trace<TransformedNodeState>, TransformerError> {
    if policy.family == DaemonFamily::Central {
        return Err(TransformerError::CentralPolicy(policy));
    }
    let mut daemon = Daemon::new(policy, g.node_count());
    Ok(engine::run_with_daemon(
        g,
        tc0,
        &ruleset(),
        alpha,
        &mut daemon,
        max_steps,
        Some(&priority_filter),
    ))
}

/// Every step's movers form an independent set.
pub fn movers_independent<S>(g: &Graph, trace: &Trace<S>) -> bool
where
    S: Clone + PartialEq,
{
    trace.moves_by_step().iter().all(|step| {
        step.iter()
            .all(|a| step.iter().all(|b| !g.has_edge(a.node, b.node)))
    })
}

/// Projects a transformed trace onto In/Out states. Register refreshes stay
/// in the move list as `R0` moves with equal pre- and post-state.
pub fn membership_trace(trace: &Trace<TransformedNodeState>) -> Trace {
    Trace {
        initial: trace.initial.membership(),
        moves: trace
            .moves
            .iter()
            .map(|m| MoveRecord {
                step: m.step,
                node: m.node,
                rule: m.rule,
                pre: m.pre.state,
                post: m.post.state,
            })
            .collect(),
        final_config: trace.final_config.membership(),
        stabilized: trace.stabilized,
        steps: trace.steps,
    }
}

/// No node has R0 enabled.
pub fn registers_fresh(g: &Graph, tc: &Configuration<TransformedNodeState>) -> bool {
    g.nodes().all(|v| !refresh_enabled(g, tc, v))
}
