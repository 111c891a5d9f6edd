//! Bounded-depth shortest-path trees under one-directional updates.
//!
//! [`EsTree`] keeps exact distances from (or to) a root up to a depth cap
//! while edges are deleted or get heavier, or, in the incremental variant,
//! while edges are inserted. [`ScaledSssp`] stacks one tree per weight scale
//! so that the depth of each tree is polynomial in `n` regardless of the
//! largest edge weight.

mod scaled;
mod tree;

pub use scaled::ScaledSssp;
pub use tree::{Direction, EsTree};

use graph_core::{EdgeId, GraphError, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EsError {
    #[error("no alive edge ({tail}, {head})")]
    NoSuchEdge { tail: VertexId, head: VertexId },
    #[error("edge {0} is not alive")]
    DeadEdge(EdgeId),
    #[error("vertex {0} is not within the depth cap")]
    Unreachable(VertexId),
    #[error("{op} is not allowed on a {variant} tree")]
    WrongVariant { op: &'static str, variant: &'static str },
    #[error(transparent)]
    Graph(#[from] GraphError),
}
