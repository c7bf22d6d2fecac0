//! Simple undirected connected graphs, the random generator used by the
//! experiments, and the plain-text edge-list format.
//!
//! The edge-list format is a header line `n m` followed by exactly `m`
//! lines `u v` with `u < v`, 0-indexed, newline terminated.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Dense node identifier in `[0, n)`. Doubles as the unique id used for
/// priority decisions.
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("graph must have at least one node")]
    Empty,
    #[error("edge endpoint {endpoint} out of range for {n} nodes")]
    InvalidEndpoint { endpoint: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("graph is disconnected or has an isolated node")]
    Disconnected,
    #[error("node {node} out of range for {n} nodes")]
    OutOfRange { node: NodeId, n: usize },
    #[error("density {density} infeasible for {n} nodes: target of {target} edges cannot reach a spanning tree")]
    InfeasibleDensity {
        n: usize,
        density: f64,
        target: usize,
    },
    #[error("malformed header: {0:?}")]
    MalformedHeader(String),
    #[error("malformed edge line {line}: {text:?}")]
    MalformedEdgeLine { line: usize, text: String },
}

/// Immutable simple undirected connected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from unordered pairs. Duplicate pairs (in either
    /// orientation) collapse to a single edge.
    pub fn from_edge_list(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            for endpoint in [u, v] {
                if endpoint >= n {
                    return Err(GraphError::InvalidEndpoint { endpoint, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        let graph = Graph {
            adjacency,
            edge_count,
        };
        if !graph.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(graph)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count()
    }

    /// Sorted open neighborhood of `v`.
    pub fn neighbors(&self, v: NodeId) -> Result<&[NodeId], GraphError> {
        self.adjacency
            .get(v)
            .map(Vec::as_slice)
            .ok_or(GraphError::OutOfRange {
                node: v,
                n: self.node_count(),
            })
    }

    pub fn degree(&self, v: NodeId) -> Result<usize, GraphError> {
        self.neighbors(v).map(<[NodeId]>::len)
    }

    /// Unchecked neighborhood access for hot loops; panics when `v` is out of range.
    #[inline]
    pub fn adj(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    #[inline]
    pub fn deg(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency
            .get(u)
            .is_some_and(|list| list.binary_search(&v).is_ok())
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// `m / (n(n-1)/2)`; 1.0 for a single node.
    pub fn density(&self) -> f64 {
        let n = self.node_count();
        if n < 2 {
            return 1.0;
        }
        self.edge_count as f64 / (n * (n - 1) / 2) as f64
    }

    fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n == 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == n
    }

    /// Canonical edge-list text.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.node_count(), self.edge_count);
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines();
        let header = lines.next().unwrap_or("");
        let (n, m) =
            parse_pair(header).ok_or_else(|| GraphError::MalformedHeader(header.into()))?;
        let mut edges = Vec::with_capacity(m);
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let pair = parse_pair(line).ok_or_else(|| GraphError::MalformedEdgeLine {
                line: i + 2,
                text: line.into(),
            })?;
            edges.push(pair);
        }
        if edges.len() != m {
            return Err(GraphError::MalformedHeader(format!(
                "{header} (declares {m} edges, found {})",
                edges.len()
            )));
        }
        Graph::from_edge_list(n, &edges)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

impl FromStr for Graph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Graph::parse_edge_list(s)
    }
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_ascii_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    it.next().is_none().then_some((a, b))
}

/// Number of edges a random graph on `n` nodes at `density` receives.
///
/// The target is `round(density * n(n-1)/2)`, raised to `n - 1` when it
/// falls short of a spanning tree. Requests below half a spanning tree are
/// rejected as infeasible.
pub fn target_edge_count(n: usize, density: f64) -> Result<usize, GraphError> {
    let total = n * n.saturating_sub(1) / 2;
    let infeasible = |target| GraphError::InfeasibleDensity { n, density, target };
    if n < 2 || !(density > 0.0 && density <= 1.0) {
        return Err(infeasible(0));
    }
    let target = ((density * total as f64).round() as usize).min(total);
    if 2 * target < n - 1 {
        return Err(infeasible(target));
    }
    Ok(target.max(n - 1))
}

/// Random connected graph with [`target_edge_count`] edges.
///
/// A uniform random spanning tree (Aldous-Broder walk on `K_n`) guarantees
/// connectivity; distinct random non-edges are then added until the target
/// is met. Deterministic for a fixed seed.
pub fn gen_random_connected(n: usize, density: f64, seed: u64) -> Result<Graph, GraphError> {
    let target = target_edge_count(n, density)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut present: HashSet<(NodeId, NodeId)> = HashSet::with_capacity(target);
    let key = |a: NodeId, b: NodeId| if a < b { (a, b) } else { (b, a) };

    let mut visited = vec![false; n];
    let mut current = rng.gen_range(0..n);
    visited[current] = true;
    let mut remaining = n - 1;
    while remaining > 0 {
        let mut next = rng.gen_range(0..n - 1);
        if next >= current {
            next += 1;
        }
        if !visited[next] {
            visited[next] = true;
            present.insert(key(current, next));
            remaining -= 1;
        }
        current = next;
    }

    let total = n * (n - 1) / 2;
    let needed = target - present.len();
    if needed > 0 {
        if needed * 2 <= total - present.len() {
            while present.len() < target {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u != v {
                    present.insert(key(u, v));
                }
            }
        } else {
            let mut candidates: Vec<(NodeId, NodeId)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|e| !present.contains(e))
                .collect();
            let (chosen, _) = candidates.partial_shuffle(&mut rng, needed);
            present.extend(chosen.iter().copied());
        }
    }

    let mut edges: Vec<_> = present.into_iter().collect();
    edges.sort_unstable();
    Graph::from_edge_list(n, &edges)
}

/// Small named graphs used throughout tests and examples.
pub mod named {
    use super::{Graph, NodeId};

    pub fn path(n: usize) -> Graph {
        let edges: Vec<(NodeId, NodeId)> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edge_list(n, &edges).expect("path is connected")
    }

    pub fn cycle(n: usize) -> Graph {
        let mut edges: Vec<(NodeId, NodeId)> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((n - 1, 0));
        Graph::from_edge_list(n, &edges).expect("cycle is connected")
    }

    pub fn complete(n: usize) -> Graph {
        let edges: Vec<(NodeId, NodeId)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph::from_edge_list(n, &edges).expect("complete graph is connected")
    }

    /// `K_{1,leaves}` with the center at node 0.
    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<(NodeId, NodeId)> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::from_edge_list(leaves + 1, &edges).expect("star is connected")
    }
}
