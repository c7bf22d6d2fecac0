//! Simulation and verification toolkit for the self-stabilizing minimal
//! α-dominating set protocol.
//!
//! * [`graph`]: connected graphs, random generation and the edge-list format.
//! * [`engine`]: guarded-rule execution under central, distributed and
//!   synchronous daemons, with full move traces.
//! * [`alpha_mds`]: the two-rule protocol and trace invariant checkers.
//! * [`transformer`]: the distance-one variant for distributed daemons.
//! * [`oracle`]: brute-force α-domination checks for small graphs.
//! * [`cli`]: experiment harness and the `alphadom` command line.

pub mod alpha_mds;
pub mod cli;
pub mod engine;
pub mod graph;
pub mod oracle;
pub mod transformer;

pub use engine::{Alpha, Configuration, DaemonPolicy, NodeState, Selection, Trace};
pub use graph::{Graph, NodeId};
