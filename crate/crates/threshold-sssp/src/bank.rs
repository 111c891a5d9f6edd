use crate::{BucketedTree, SsspError};
use graph_core::{VertexId, Weight, INF};

/// Anything that overestimates distances from a fixed root.
pub trait DistanceEstimate {
    fn estimate(&self, v: VertexId) -> u64;
}

impl DistanceEstimate for BucketedTree {
    fn estimate(&self, v: VertexId) -> u64 {
        BucketedTree::estimate(self, v)
    }
}

/// Smallest estimate for `v` across `bank`, or [`INF`].
pub fn multi_scale_distance<E: DistanceEstimate>(bank: &[E], v: VertexId) -> u64 {
    bank.iter().map(|e| e.estimate(v)).min().unwrap_or(INF)
}

/// DAG trees at depths `δ = 2^i` for `i = 0..=⌈lg(nW)⌉`.
#[derive(Debug, Clone)]
pub struct DagBank {
    trees: Vec<BucketedTree>,
}

impl DagBank {
    pub fn new(
        n: usize,
        edges: &[(VertexId, VertexId, Weight)],
        tau: &[usize],
        root: VertexId,
        eps: f64,
    ) -> Result<Self, SsspError> {
        let w = edges.iter().map(|e| e.2).max().unwrap_or(1).max(1);
        let span = (n.max(2) as u128) * w as u128;
        let top = 128 - (span - 1).leading_zeros();
        let trees = (0..=top)
            .map(|i| BucketedTree::dag(n, edges, tau, root, 1u64 << i, eps))
            .collect::<Result<_, _>>()?;
        Ok(Self { trees })
    }

    pub fn trees(&self) -> &[BucketedTree] {
        &self.trees
    }

    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), SsspError> {
        for t in &mut self.trees {
            t.delete_edge(u, v)?;
        }
        Ok(())
    }

    pub fn distance(&self, v: VertexId) -> u64 {
        multi_scale_distance(&self.trees, v)
    }
}
