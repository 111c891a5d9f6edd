//! Shared graph plumbing for the partially dynamic structures in this workspace.
//!
//! [`DynamicDigraph`] is a weighted multigraph whose edges are tombstoned on
//! deletion, so an [`EdgeId`] handed out once stays meaningful for the lifetime
//! of the graph. [`Partition`] is a refinement-only partition of the vertex set
//! used for node contractions, and [`io`] reads and writes the flat graph and
//! update file formats.

mod bucket;
mod digraph;
mod error;
pub mod io;
mod partition;
mod scc;
mod view;

pub use bucket::BucketQueue;
pub use digraph::{DynamicDigraph, Edge, Mode, Update, UpdateLog};
pub use error::GraphError;
pub use partition::{flatten, Partition};
pub use scc::components;
pub use view::{InducedSubgraph, VertexMask};

/// Dense vertex identifier in `0..n`.
pub type VertexId = usize;
/// Stable index into a graph's edge store.
pub type EdgeId = usize;
/// Identifier of a node (a set of vertices) inside a [`Partition`].
pub type NodeId = usize;
/// Integral edge weight. Unweighted graphs use weight 1 everywhere.
pub type Weight = u64;

/// Sentinel distance for "not reachable within the configured cap".
pub const INF: u64 = u64::MAX;

/// Base-2 logarithm of `max(n, 2)`, used wherever a `log n` factor appears in a
/// threshold so that tiny graphs never produce a zero factor.
pub fn lg(n: usize) -> f64 {
    (n.max(2) as f64).log2()
}
