use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DaemonFamily {
    /// Exactly one enabled node per step.
    Central,
    /// A non-empty subset of the enabled nodes per step.
    Distributed,
    /// Every enabled node per step.
    Synchronous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Selection {
    Random {
        seed: u64,
    },
    MinId,
    MaxId,
    /// Unfair scheduling: the enabled node that has waited longest since its
    /// last selection is picked last. Never-selected nodes count as having
    /// waited longest; ties go to the higher id.
    AdversarialStale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DaemonPolicy {
    pub family: DaemonFamily,
    pub selection: Selection,
    /// Informational only; no policy here enforces fairness.
    pub fair: bool,
}

impl DaemonPolicy {
    pub fn central(selection: Selection) -> Self {
        DaemonPolicy {
            family: DaemonFamily::Central,
            selection,
            fair: false,
        }
    }

    pub fn distributed(selection: Selection) -> Self {
        DaemonPolicy {
            family: DaemonFamily::Distributed,
            selection,
            fair: false,
        }
    }

    pub fn synchronous() -> Self {
        DaemonPolicy {
            family: DaemonFamily::Synchronous,
            selection: Selection::MinId,
            fair: true,
        }
    }
}

impl fmt::Display for DaemonPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let family = match self.family {
            DaemonFamily::Central => "central",
            DaemonFamily::Distributed => "dist",
            DaemonFamily::Synchronous => return f.write_str("sync"),
        };
        let selection = match self.selection {
            Selection::Random { .. } => "random",
            Selection::MinId => "minid",
            Selection::MaxId => "maxid",
            Selection::AdversarialStale => "stale",
        };
        write!(f, "{family}:{selection}")
    }
}

/// Runtime state of a scheduler: its random stream and selection history.
#[derive(Debug, Clone)]
pub struct Daemon {
    policy: DaemonPolicy,
    rng: ChaCha8Rng,
    last_selected: Vec<Option<u64>>,
    clock: u64,
}

impl Daemon {
    pub fn new(policy: DaemonPolicy, node_count: usize) -> Self {
        let seed = match policy.selection {
            Selection::Random { seed } => seed,
            _ => 0,
        };
        Daemon {
            policy,
            rng: ChaCha8Rng::seed_from_u64(seed),
            last_selected: vec![None; node_count],
            clock: 0,
        }
    }

    pub fn policy(&self) -> DaemonPolicy {
        self.policy
    }

    /// Picks the movers for one step from a non-empty, ascending `enabled`
    /// list. The result is ascending.
    pub fn select(&mut self, enabled: &[NodeId]) -> Vec<NodeId> {
        if enabled.is_empty() {
            return Vec::new();
        }
        let mut chosen = match self.policy.family {
            DaemonFamily::Central => vec![self.pick_one(enabled)],
            DaemonFamily::Synchronous => enabled.to_vec(),
            DaemonFamily::Distributed => self.pick_subset(enabled),
        };
        chosen.sort_unstable();
        self.clock += 1;
        for &v in &chosen {
            self.last_selected[v] = Some(self.clock);
        }
        chosen
    }

    fn pick_one(&mut self, enabled: &[NodeId]) -> NodeId {
        match self.policy.selection {
            Selection::Random { .. } => *enabled.choose(&mut self.rng).expect("non-empty"),
            Selection::MinId => enabled[0],
            Selection::MaxId => enabled[enabled.len() - 1],
            Selection::AdversarialStale => self.stale_order(enabled)[0],
        }
    }

    fn pick_subset(&mut self, enabled: &[NodeId]) -> Vec<NodeId> {
        let half = enabled.len().div_ceil(2);
        match self.policy.selection {
            Selection::Random { .. } => {
                let subset: Vec<NodeId> = enabled
                    .iter()
                    .copied()
                    .filter(|_| self.rng.gen_bool(0.5))
                    .collect();
                if subset.is_empty() {
                    vec![*enabled.choose(&mut self.rng).expect("non-empty")]
                } else {
                    subset
                }
            }
            Selection::MinId => enabled[..half].to_vec(),
            Selection::MaxId => enabled[enabled.len() - half..].to_vec(),
            Selection::AdversarialStale => self.stale_order(enabled)[..half].to_vec(),
        }
    }

    /// Enabled nodes ordered most-recently-selected first.
    fn stale_order(&self, enabled: &[NodeId]) -> Vec<NodeId> {
        let mut order = enabled.to_vec();
        order.sort_by_key(|&v| std::cmp::Reverse((self.last_selected[v], v)));
        order
    }
}
