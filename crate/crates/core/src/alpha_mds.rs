//! The two-rule minimal α-dominating set protocol.
//!
//! Each node keeps a single `In`/`Out` state and derives two expressions
//! from its neighborhood:
//!
//! * `exp1 = |N_S(v)| / |N(v)|`
//! * `exp2 = (|N_S(v)| - 1) / |N(v)|`, the value `exp1` would take if one
//!   In-neighbor left.
//!
//! An `Out` node with `exp1 < α` joins (R1). An `In` node with
//! `exp1 >= α` whose every `Out` neighbor still has `exp2 >= α` leaves (R2).
//! R2 reads neighbors' expressions, so a guard depends on the distance-two
//! neighborhood.

use num_rational::Ratio;

use crate::engine::{
    self, Alpha, Configuration, DaemonPolicy, DirectView, LocalView, Membership, NodeState, Rule,
    RuleLabel, RuleSet, Trace,
};
use crate::graph::{Graph, NodeId};

/// `|N_S(v)|` and `|N(v)|` for one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpressionView {
    pub in_neighbors: usize,
    pub degree: usize,
}

impl ExpressionView {
    pub fn of(view: &impl LocalView, v: NodeId) -> Self {
        ExpressionView {
            in_neighbors: view.in_neighbors(v),
            degree: view.graph().deg(v),
        }
    }

    pub fn exp1(self) -> Ratio<i64> {
        Ratio::new(self.in_neighbors as i64, self.degree as i64)
    }

    pub fn exp2(self) -> Ratio<i64> {
        Ratio::new(self.in_neighbors as i64 - 1, self.degree as i64)
    }

    #[inline]
    pub fn exp1_meets(self, alpha: Alpha) -> bool {
        alpha.is_met_by(self.in_neighbors as i64, self.degree as i64)
    }

    #[inline]
    pub fn exp2_meets(self, alpha: Alpha) -> bool {
        alpha.is_met_by(self.in_neighbors as i64 - 1, self.degree as i64)
    }
}

pub(crate) fn r1_guard(view: &impl LocalView, alpha: Alpha, v: NodeId) -> bool {
    !view.is_in(v) && !ExpressionView::of(view, v).exp1_meets(alpha)
}

pub(crate) fn r2_guard(view: &impl LocalView, alpha: Alpha, v: NodeId) -> bool {
    view.is_in(v)
        && ExpressionView::of(view, v).exp1_meets(alpha)
        && view
            .graph()
            .adj(v)
            .iter()
            .filter(|&&w| !view.is_in(w))
            .all(|&w| ExpressionView::of(view, w).exp2_meets(alpha))
}

pub fn exp1(g: &Graph, c: &Configuration, v: NodeId) -> Ratio<i64> {
    ExpressionView::of(&DirectView::new(g, c), v).exp1()
}

pub fn exp2(g: &Graph, c: &Configuration, v: NodeId) -> Ratio<i64> {
    ExpressionView::of(&DirectView::new(g, c), v).exp2()
}

pub fn r1_enabled(g: &Graph, c: &Configuration, alpha: Alpha, v: NodeId) -> bool {
    r1_guard(&DirectView::new(g, c), alpha, v)
}

pub fn r2_enabled(g: &Graph, c: &Configuration, alpha: Alpha, v: NodeId) -> bool {
    r2_guard(&DirectView::new(g, c), alpha, v)
}

/// No node has R1 or R2 enabled.
pub fn legitimate(g: &Graph, c: &Configuration, alpha: Alpha) -> bool {
    let view = DirectView::new(g, c);
    g.nodes()
        .all(|v| !r1_guard(&view, alpha, v) && !r2_guard(&view, alpha, v))
}

/// `[R1: join, R2: leave]` for the engine.
pub fn ruleset() -> RuleSet<NodeState> {
    RuleSet::new(vec![
        Rule {
            label: RuleLabel::R1,
            guard: |s, v| r1_guard(s, s.alpha(), v),
            action: |_, _| NodeState::In,
        },
        Rule {
            label: RuleLabel::R2,
            guard: |s, v| r2_guard(s, s.alpha(), v),
            action: |_, _| NodeState::Out,
        },
    ])
}

/// Runs the protocol from `c0` with the engine's default step budget.
pub fn run(g: &Graph, c0: &Configuration, alpha: Alpha, policy: DaemonPolicy) -> Trace {
    engine::run_to_stabilization(
        g,
        c0,
        &ruleset(),
        alpha,
        policy,
        engine::default_max_steps(g),
    )
}

/// A broken trace property, as found by the checkers below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// More than `2n` moves in total.
    MoveBound { moves: usize, bound: usize },
    /// A node's own rule sequence is not one of ε, R1, R2, R1·R2.
    NodeSequence {
        node: NodeId,
        sequence: Vec<RuleLabel>,
    },
    /// A node executed R1 after having executed R2.
    Reentry { node: NodeId, step: usize },
    /// An Out node's `exp1` fell from `>= α` to `< α`.
    Exp1Drop { node: NodeId, step: usize },
}

/// Total moves at most `2n` and every per-node sequence in
/// `{ε, R1, R2, R1·R2}`.
pub fn check_move_bound(trace: &Trace) -> Vec<Violation> {
    let n = trace.initial.len();
    let mut found = Vec::new();
    if trace.total_moves() > 2 * n {
        found.push(Violation::MoveBound {
            moves: trace.total_moves(),
            bound: 2 * n,
        });
    }
    for (node, sequence) in trace.node_sequences().into_iter().enumerate() {
        use RuleLabel::{R1, R2};
        if !matches!(sequence.as_slice(), [] | [R1] | [R2] | [R1, R2]) {
            found.push(Violation::NodeSequence { node, sequence });
        }
    }
    found
}

/// No node executes R1 after R2.
pub fn check_no_reentry(trace: &Trace) -> Vec<Violation> {
    let mut left = vec![false; trace.initial.len()];
    let mut found = Vec::new();
    for record in &trace.moves {
        match record.rule {
            RuleLabel::R2 => left[record.node] = true,
            RuleLabel::R1 if left[record.node] => found.push(Violation::Reentry {
                node: record.node,
                step: record.step,
            }),
            _ => {}
        }
    }
    found
}

/// Replays the trace and reports every Out node whose `exp1` drops below
/// `alpha` after having reached it while staying Out.
pub fn check_exp1_monotone(g: &Graph, trace: &Trace, alpha: Alpha) -> Vec<Violation> {
    let mut states = trace.initial.states().to_vec();
    let meets = |states: &[NodeState], w: NodeId| {
        let view = DirectView { graph: g, states };
        ExpressionView::of(&view, w).exp1_meets(alpha)
    };
    let mut armed: Vec<bool> = g
        .nodes()
        .map(|w| !states[w].is_in() && meets(&states, w))
        .collect();
    let mut found = Vec::new();
    for step in trace.moves_by_step() {
        for record in step {
            states[record.node] = record.post;
        }
        let mut touched: Vec<NodeId> = step
            .iter()
            .flat_map(|r| std::iter::once(r.node).chain(g.adj(r.node).iter().copied()))
            .collect();
        touched.sort_unstable();
        touched.dedup();
        for w in touched {
            let out = !states[w].is_in();
            let ok = meets(&states, w);
            if armed[w] && out && !ok {
                found.push(Violation::Exp1Drop {
                    node: w,
                    step: step[0].step,
                });
            }
            armed[w] = out && ok;
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{step, Daemon, Selection};
    use crate::graph::named::{complete, cycle, path, star};

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn exp1_values() {
        assert_eq!(
            exp1(&path(3), &Configuration::from_members(3, &[0, 2]), 1),
            r(1, 1)
        );
        assert_eq!(exp1(&path(3), &Configuration::all_out(3), 0), r(0, 1));
        assert_eq!(
            exp1(&cycle(4), &Configuration::from_members(4, &[1]), 0),
            r(1, 2)
        );
    }

    #[test]
    fn exp2_values() {
        assert_eq!(
            exp2(&path(3), &Configuration::from_members(3, &[0, 2]), 1),
            r(1, 2)
        );
        assert_eq!(exp2(&path(3), &Configuration::all_out(3), 0), r(-1, 1));
        assert_eq!(exp2(&complete(5), &Configuration::all_in(5), 0), r(3, 4));
    }

    #[test]
    fn exp2_is_exp1_minus_inverse_degree() {
        let g = star(4);
        let c = Configuration::from_members(5, &[0, 2]);
        for v in g.nodes() {
            assert_eq!(exp2(&g, &c, v), exp1(&g, &c, v) - r(1, g.deg(v) as i64));
        }
    }

    #[test]
    fn r1_cases() {
        let p3 = path(3);
        assert!(r1_enabled(&p3, &Configuration::all_out(3), Alpha::HALF, 1));
        assert!(!r1_enabled(
            &p3,
            &Configuration::from_members(3, &[1]),
            Alpha::HALF,
            0
        ));
        assert!(!r1_enabled(
            &p3,
            &Configuration::from_members(3, &[1]),
            Alpha::HALF,
            1
        ));
    }

    #[test]
    fn r2_cases() {
        let p3 = path(3);
        assert!(r2_enabled(&p3, &Configuration::all_in(3), Alpha::HALF, 0));
        assert!(r2_enabled(
            &p3,
            &Configuration::from_members(3, &[1, 2]),
            Alpha::HALF,
            2
        ));
        assert!(!r2_enabled(
            &p3,
            &Configuration::from_members(3, &[1, 2]),
            Alpha::HALF,
            1
        ));
        assert!(!r2_enabled(
            &p3,
            &Configuration::from_members(3, &[1]),
            Alpha::HALF,
            1
        ));
    }

    #[test]
    fn boundary_alpha_is_inclusive() {
        let third = Alpha::new(1, 3).unwrap();
        // Degree-3 center with one In leaf sits exactly at 1/3.
        let c = Configuration::from_members(4, &[1]);
        assert_eq!(exp1(&star(3), &c, 0), r(1, 3));
        assert!(!r1_enabled(&star(3), &c, third, 0));

        // In K4 with S = {1, 2}, both Out nodes have exp2 exactly 1/3.
        let k4 = complete(4);
        let c = Configuration::from_members(4, &[1, 2]);
        assert_eq!(exp2(&k4, &c, 0), r(1, 3));
        assert!(r2_enabled(&k4, &c, third, 1));
        assert!(!r2_enabled(&k4, &c, Alpha::HALF, 1));
    }

    #[test]
    fn legitimacy() {
        let p3 = path(3);
        assert!(legitimate(
            &p3,
            &Configuration::from_members(3, &[1]),
            Alpha::HALF
        ));
        assert!(!legitimate(&p3, &Configuration::all_in(3), Alpha::HALF));
        assert!(!legitimate(
            &cycle(5),
            &Configuration::all_out(5),
            Alpha::new(1, 7).unwrap()
        ));
    }

    #[test]
    fn enabled_set_examples() {
        let p3 = path(3);
        let rules = ruleset();
        assert_eq!(
            engine::enabled_nodes(&p3, &Configuration::all_out(3), &rules, Alpha::HALF),
            [0, 1, 2]
        );
        assert!(engine::enabled_nodes(
            &p3,
            &Configuration::from_members(3, &[1]),
            &rules,
            Alpha::HALF
        )
        .is_empty());
    }

    #[test]
    fn central_minid_step_from_all_in() {
        let p3 = path(3);
        let mut d = Daemon::new(DaemonPolicy::central(Selection::MinId), 3);
        let (c, records) = step(
            &p3,
            &Configuration::all_in(3),
            &ruleset(),
            Alpha::HALF,
            &mut d,
            0,
        )
        .unwrap();
        assert_eq!(c.members(), [1, 2]);
        assert_eq!(records.len(), 1);
        assert_eq!((records[0].node, records[0].rule), (0, RuleLabel::R2));
    }

    #[test]
    fn synchronous_step_from_all_out() {
        let p3 = path(3);
        let mut d = Daemon::new(DaemonPolicy::synchronous(), 3);
        let (c, records) = step(
            &p3,
            &Configuration::all_out(3),
            &ruleset(),
            Alpha::HALF,
            &mut d,
            0,
        )
        .unwrap();
        assert_eq!(c, Configuration::all_in(3));
        assert!(records.iter().all(|r| r.rule == RuleLabel::R1));
    }

    #[test]
    fn hand_trace_on_p3() {
        let trace = run(
            &path(3),
            &Configuration::all_in(3),
            Alpha::HALF,
            DaemonPolicy::central(Selection::MinId),
        );
        let moves: Vec<_> = trace.moves.iter().map(|m| (m.node, m.rule)).collect();
        assert_eq!(moves, [(0, RuleLabel::R2), (2, RuleLabel::R2)]);
        assert_eq!(trace.final_config.members(), [1]);
        assert!(trace.stabilized);
    }

    #[test]
    fn k5_full_alpha_keeps_four() {
        let trace = run(
            &complete(5),
            &Configuration::all_out(5),
            Alpha::ONE,
            DaemonPolicy::central(Selection::Random { seed: 2 }),
        );
        assert!(trace.stabilized);
        assert_eq!(trace.final_config.set_size(), 4);
    }

    #[test]
    fn p3_random_daemon_within_bound() {
        let trace = run(
            &path(3),
            &Configuration::all_out(3),
            Alpha::HALF,
            DaemonPolicy::central(Selection::Random { seed: 7 }),
        );
        assert!(trace.stabilized);
        assert!(trace.total_moves() <= 6);
        assert!(legitimate(&path(3), &trace.final_config, Alpha::HALF));
    }

    #[test]
    fn silent_once_stable() {
        let c = Configuration::from_members(3, &[1]);
        let trace = run(
            &path(3),
            &c,
            Alpha::HALF,
            DaemonPolicy::central(Selection::MinId),
        );
        assert!(trace.stabilized);
        assert_eq!(trace.total_moves(), 0);
        assert_eq!(trace.final_config, c);
    }

    #[test]
    fn checkers_flag_handmade_violations() {
        use crate::engine::MoveRecord;
        let g = path(3);
        let mv = |step, node, rule, pre, post| MoveRecord {
            step,
            node,
            rule,
            pre,
            post,
        };
        let (i, o) = (NodeState::In, NodeState::Out);
        let trace = Trace {
            initial: Configuration::from_members(3, &[0, 1]),
            moves: vec![
                mv(0, 1, RuleLabel::R2, i, o),
                mv(1, 1, RuleLabel::R1, o, i),
                mv(2, 0, RuleLabel::R2, i, o),
            ],
            final_config: Configuration::from_members(3, &[1]),
            stabilized: true,
            steps: 3,
        };
        assert_eq!(
            check_no_reentry(&trace),
            [Violation::Reentry { node: 1, step: 1 }]
        );
        assert!(matches!(
            check_move_bound(&trace)[..],
            [Violation::NodeSequence { node: 1, .. }]
        ));
        // Node 2 is Out with exp1 = 1 initially; node 1 leaving drops it to 0.
        assert_eq!(
            check_exp1_monotone(&g, &trace, Alpha::HALF),
            [Violation::Exp1Drop { node: 2, step: 0 }]
        );
    }
}
