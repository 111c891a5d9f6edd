//! Slow, obviously-correct reference algorithms.
//!
//! Nothing here touches the internals of the dynamic structures. A
//! [`Snapshot`] is a frozen edge list with its own adjacency arrays, and every
//! routine is a textbook algorithm written directly against it.

pub mod checks;
mod paths;
mod scc;

pub use paths::{
    bellman_ford, bfs, dijkstra, s_distance, s_distance_all_pairs, s_distance_to, weak_diameter,
};
pub use scc::{kosaraju, scc_labels, scc_partition, tarjan};

use graph_core::{DynamicDigraph, VertexId, Weight};

/// Distance value for unreachable vertices.
pub const UNREACHABLE: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    n: usize,
    edges: Vec<(VertexId, VertexId, Weight)>,
    out: Vec<Vec<(VertexId, Weight)>>,
    inc: Vec<Vec<(VertexId, Weight)>>,
}

impl Snapshot {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId, Weight)>) -> Self {
        let edges: Vec<_> = edges.into_iter().collect();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for &(u, v, w) in &edges {
            out[u].push((v, w));
            inc[v].push((u, w));
        }
        Self { n, edges, out, inc }
    }

    pub fn unweighted(n: usize, pairs: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        Self::new(n, pairs.into_iter().map(|(u, v)| (u, v, 1)))
    }

    /// Copies the alive edges of `g` at its current stage.
    pub fn of(g: &DynamicDigraph) -> Self {
        Self::new(g.n(), g.alive_edges().map(|(_, u, v, w)| (u, v, w)))
    }

    /// The same snapshot restricted to edges with both endpoints in `keep`.
    pub fn restrict(&self, keep: &[bool]) -> Self {
        Self::new(
            self.n,
            self.edges.iter().copied().filter(|&(u, v, _)| keep[u] && keep[v]),
        )
    }

    pub fn reversed(&self) -> Self {
        Self::new(self.n, self.edges.iter().map(|&(u, v, w)| (v, u, w)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(VertexId, VertexId, Weight)] {
        &self.edges
    }

    pub fn out(&self, v: VertexId) -> &[(VertexId, Weight)] {
        &self.out[v]
    }

    pub fn inc(&self, v: VertexId) -> &[(VertexId, Weight)] {
        &self.inc[v]
    }
}
