//! Lazy single-source distances for one distance band.
//!
//! A [`BucketedTree`] keeps a shortest-path tree from a root up to a fixed
//! depth. Instead of rescanning every in-neighbor whenever a tree edge
//! breaks, a node sorts its in-neighbors into dyadic buckets by how far
//! apart they are in a numbering `τ`, and checks far buckets only at coarse
//! estimate values. Edges that jump far in `τ` are rare on any path, so the
//! error this introduces stays small.
//!
//! Two numberings are supported: a topological order of a DAG (every node
//! one vertex), and the nodes of an approximate topological order from the
//! `ato` crate, whose splits are replayed through [`ChangeSet`]s. A
//! [`DagBank`] runs one tree per power of two and answers with the smallest
//! estimate.
//!
//! ```
//! use threshold_sssp::BucketedTree;
//!
//! let edges = [(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)];
//! let mut t = BucketedTree::dag_auto(4, &edges, 0, 4, 0.25).unwrap();
//! assert_eq!(t.estimate(3), 2);
//! t.delete_edge(1, 3).unwrap();
//! assert_eq!(t.estimate(3), 2);
//! ```

mod bank;
mod chi;
mod tree;

pub use ato::ChangeSet;
pub use bank::{multi_scale_distance, DagBank, DistanceEstimate};
pub use chi::{bucket_of, chi};
pub use tree::{topological_numbering, BucketedTree, TreeStats};

use graph_core::{NodeId, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SsspError {
    #[error("edge ({0}, {1}) goes against the order")]
    NotADag(VertexId, VertexId),
    #[error("not a numbering of the vertices: {0}")]
    BadOrder(String),
    #[error("no alive edge ({0}, {1})")]
    NoSuchEdge(VertexId, VertexId),
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(VertexId),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("change records do not match the partition: {0}")]
    InconsistentChangeRecord(String),
}

/// Read access to a partition with interval starts, as needed to replay
/// its splits.
pub trait OrderView {
    fn node_of(&self, v: VertexId) -> NodeId;
    /// First position of the interval of node `x`.
    fn tau(&self, x: NodeId) -> usize;
    /// Number of update stages seen so far.
    fn stage(&self) -> u64;
}

impl OrderView for ato::Ato {
    fn node_of(&self, v: VertexId) -> NodeId {
        ato::Ato::node_of(self, v)
    }

    fn tau(&self, x: NodeId) -> usize {
        ato::Ato::tau(self, x)
    }

    fn stage(&self) -> u64 {
        ato::Ato::stage(self)
    }
}
