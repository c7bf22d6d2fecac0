//! Brute-force ground truth for α-domination on small graphs.

use thiserror::Error;

use crate::engine::{Alpha, Configuration, Membership};
use crate::graph::{Graph, NodeId};

/// Largest set (or graph, for [`minimum_cardinality`]) the exhaustive
/// searches accept.
pub const EXHAUSTIVE_LIMIT: usize = 25;

/// Bitmask fast paths need one word per graph.
const MASK_NODES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("exhaustive search over {size} elements exceeds the budget of {limit}")]
    BudgetExceeded { size: usize, limit: usize },
}

/// Set of node ids over `[0, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeSet {
    n: usize,
    words: Vec<u64>,
}

impl NodeSet {
    pub fn empty(n: usize) -> Self {
        NodeSet {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = NodeSet::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn from_members(n: usize, members: &[NodeId]) -> Self {
        let mut s = NodeSet::empty(n);
        for &v in members {
            s.insert(v);
        }
        s
    }

    pub fn of_configuration<S: Membership>(c: &Configuration<S>) -> Self {
        NodeSet::from_members(c.len(), &c.members())
    }

    /// Universe size `n`.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v < self.n && self.words[v / 64] & (1 << (v % 64)) != 0
    }

    pub fn insert(&mut self, v: NodeId) {
        assert!(v < self.n, "node {v} outside universe of {}", self.n);
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: NodeId) {
        if v < self.n {
            self.words[v / 64] &= !(1 << (v % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn members(&self) -> Vec<NodeId> {
        (0..self.n).filter(|&v| self.contains(v)).collect()
    }

    fn mask(&self) -> u64 {
        debug_assert!(self.n <= MASK_NODES);
        self.words.first().copied().unwrap_or(0)
    }

    fn from_mask(n: usize, mask: u64) -> Self {
        let mut s = NodeSet::empty(n);
        if let Some(w) = s.words.first_mut() {
            *w = mask;
        }
        s
    }
}

fn in_count(g: &Graph, s: &NodeSet, v: NodeId) -> usize {
    g.adj(v).iter().filter(|&&u| s.contains(u)).count()
}

/// Every node outside `s` has at least an `alpha` fraction of its
/// neighbors inside `s`.
pub fn is_alpha_dominating(g: &Graph, s: &NodeSet, alpha: Alpha) -> bool {
    g.nodes()
        .filter(|&v| !s.contains(v))
        .all(|v| alpha.is_met_by(in_count(g, s, v) as i64, g.deg(v) as i64))
}

/// `s` is α-dominating and no `s \ {u}` is.
pub fn is_minimal_by_single_removal(g: &Graph, s: &NodeSet, alpha: Alpha) -> bool {
    if !is_alpha_dominating(g, s, alpha) {
        return false;
    }
    let mut t = s.clone();
    s.members().into_iter().all(|u| {
        t.remove(u);
        let dominating = is_alpha_dominating(g, &t, alpha);
        t.insert(u);
        !dominating
    })
}

/// Adjacency bitmasks for graphs of at most 64 nodes.
struct MaskGraph {
    adj: Vec<u64>,
    deg: Vec<i64>,
    all: u64,
}

impl MaskGraph {
    fn new(g: &Graph) -> Self {
        let n = g.node_count();
        debug_assert!(n <= MASK_NODES);
        let adj = g
            .nodes()
            .map(|v| g.adj(v).iter().fold(0u64, |m, &u| m | 1 << u))
            .collect();
        let deg = g.nodes().map(|v| g.deg(v) as i64).collect();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        MaskGraph { adj, deg, all }
    }

    fn dominated(&self, s: u64, alpha: Alpha) -> bool {
        let mut outside = self.all & !s;
        while outside != 0 {
            let v = outside.trailing_zeros() as usize;
            outside &= outside - 1;
            if !alpha.is_met_by((self.adj[v] & s).count_ones() as i64, self.deg[v]) {
                return false;
            }
        }
        true
    }

    fn classically_dominated(&self, s: u64) -> bool {
        let mut outside = self.all & !s;
        while outside != 0 {
            let v = outside.trailing_zeros() as usize;
            outside &= outside - 1;
            if self.adj[v] & s == 0 {
                return false;
            }
        }
        true
    }
}

/// `s` is α-dominating and no proper subset of `s` is.
///
/// Single removals are tried first; surviving sets are confirmed by
/// enumerating every proper subset.
pub fn is_minimal_alpha_dominating(
    g: &Graph,
    s: &NodeSet,
    alpha: Alpha,
) -> Result<bool, OracleError> {
    let k = s.len();
    if k > EXHAUSTIVE_LIMIT {
        return Err(OracleError::BudgetExceeded {
            size: k,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    if g.node_count() > MASK_NODES {
        return Err(OracleError::BudgetExceeded {
            size: g.node_count(),
            limit: MASK_NODES,
        });
    }
    if !is_minimal_by_single_removal(g, s, alpha) {
        return Ok(false);
    }
    let mg = MaskGraph::new(g);
    let full = s.mask();
    // Walk every proper submask of `full`, largest first.
    let mut sub = full.wrapping_sub(1) & full;
    loop {
        if sub != full && mg.dominated(sub, alpha) {
            return Ok(false);
        }
        if sub == 0 {
            return Ok(true);
        }
        sub = (sub - 1) & full;
    }
}

fn check_exhaustive_graph(g: &Graph) -> Result<MaskGraph, OracleError> {
    if g.node_count() > EXHAUSTIVE_LIMIT {
        return Err(OracleError::BudgetExceeded {
            size: g.node_count(),
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    Ok(MaskGraph::new(g))
}

/// Next larger integer with the same number of set bits.
fn next_same_popcount(x: u64) -> u64 {
    let smallest = x & x.wrapping_neg();
    let ripple = x + smallest;
    let ones = ((x ^ ripple) >> 2) / smallest;
    ripple | ones
}

/// Smallest α-dominating set, searching cardinalities in increasing order.
pub fn minimum_alpha_dominating_set(g: &Graph, alpha: Alpha) -> Result<NodeSet, OracleError> {
    let mg = check_exhaustive_graph(g)?;
    let n = g.node_count();
    for k in 0..=n {
        if k == 0 {
            if mg.dominated(0, alpha) {
                return Ok(NodeSet::empty(n));
            }
            continue;
        }
        let mut s = (1u64 << k) - 1;
        while s <= mg.all {
            if mg.dominated(s, alpha) {
                return Ok(NodeSet::from_mask(n, s));
            }
            s = next_same_popcount(s);
        }
    }
    Ok(NodeSet::full(n))
}

pub fn minimum_cardinality(g: &Graph, alpha: Alpha) -> Result<usize, OracleError> {
    minimum_alpha_dominating_set(g, alpha).map(|s| s.len())
}

/// Every minimal α-dominating set of `g`, in increasing mask order.
pub fn all_minimal_alpha_dominating_sets(
    g: &Graph,
    alpha: Alpha,
) -> Result<Vec<NodeSet>, OracleError> {
    let mg = check_exhaustive_graph(g)?;
    let n = g.node_count();
    let mut found = Vec::new();
    for s in 0..=mg.all {
        if !mg.dominated(s, alpha) {
            continue;
        }
        let mut bits = s;
        let mut minimal = true;
        while bits != 0 {
            let low = bits & bits.wrapping_neg();
            bits ^= low;
            if mg.dominated(s ^ low, alpha) {
                minimal = false;
                break;
            }
        }
        if minimal {
            found.push(NodeSet::from_mask(n, s));
        }
    }
    Ok(found)
}

/// Every node outside `s` has a neighbor in `s`.
pub fn is_dominating_classical(g: &Graph, s: &NodeSet) -> bool {
    g.nodes()
        .filter(|&v| !s.contains(v))
        .all(|v| g.adj(v).iter().any(|&u| s.contains(u)))
}

/// Dominating, and dropping any single member breaks domination.
pub fn is_minimal_dominating_classical(g: &Graph, s: &NodeSet) -> bool {
    if !is_dominating_classical(g, s) {
        return false;
    }
    if g.node_count() <= MASK_NODES {
        let mg = MaskGraph::new(g);
        let full = s.mask();
        let mut bits = full;
        while bits != 0 {
            let low = bits & bits.wrapping_neg();
            bits ^= low;
            if mg.classically_dominated(full ^ low) {
                return false;
            }
        }
        return true;
    }
    let mut t = s.clone();
    s.members().into_iter().all(|u| {
        t.remove(u);
        let ok = is_dominating_classical(g, &t);
        t.insert(u);
        !ok
    })
}
