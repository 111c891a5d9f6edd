//! Approximate topological orders for decremental weighted digraphs.
//!
//! An [`Ato`] keeps a partition of the vertices into nodes of small weak
//! diameter together with a numbering `τ` of the nodes. On a DAG the nodes
//! are single vertices and `τ` is a topological order; with cycles the
//! nodes are components of a pruned subgraph, and the numbering is
//! topological for that subgraph. [`Ato::path_cost`] measures how far a
//! path in the real graph jumps around in `τ`.
//!
//! Each node checks its width with exact distance trees from a random
//! center. The trees are built once per center on the graph induced by the
//! node at creation time, so they only see deletions chosen by the caller.

mod cost;
mod order;

pub use cost::{PairQuality, PathCost, QualityReport};
pub use order::{Ato, AtoConfig, AtoError, AtoStats, ChangeSet, NodeSplit};

use graph_core::{DynamicDigraph, EdgeId, VertexId};

/// Independent copies of an [`Ato`] driven by the same deletions.
#[derive(Debug, Clone)]
pub struct AtoBundle {
    copies: Vec<Ato>,
}

impl AtoBundle {
    /// `cfg.bundle` copies seeded `seed, seed + 1, ...`.
    pub fn new(g: &DynamicDigraph, cfg: AtoConfig, seed: u64) -> Result<Self, AtoError> {
        if cfg.bundle == 0 {
            return Err(AtoError::EmptyBundle);
        }
        let copies = (0..cfg.bundle as u64)
            .map(|k| Ato::new(g, cfg, seed.wrapping_add(k)))
            .collect::<Result<_, _>>()?;
        Ok(Self { copies })
    }

    pub fn copies(&self) -> &[Ato] {
        &self.copies
    }

    pub fn delete(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, AtoError> {
        let mut id = None;
        for a in &mut self.copies {
            id = Some(a.delete(u, v)?);
        }
        Ok(id.expect("bundles are never empty"))
    }

    /// One report per copy.
    pub fn quality_reports(&self, pairs: &[(VertexId, VertexId)]) -> Vec<QualityReport> {
        self.copies.iter().map(|a| a.quality_report(pairs)).collect()
    }
}
